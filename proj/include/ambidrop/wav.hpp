/*
Copyright 2026 The AmbiDrop Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// WAV read/write.  Output is always 32-bit float PCM; input accepts 32-bit
// float and 16-bit integer PCM.

#ifndef AMBIDROP_WAV_HPP_
#define AMBIDROP_WAV_HPP_

#include <string>

#include "ambidrop/common.hpp"

namespace ambidrop {

void write_wav(const MultichannelSignal& audio, const std::string& path);
MultichannelSignal read_wav(const std::string& path);

}  // namespace ambidrop

#endif  // AMBIDROP_WAV_HPP_
