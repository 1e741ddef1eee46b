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

// Shared binary container: 5-byte magic, uint32 little-endian header
// length, UTF-8 JSON header, then a float32 little-endian payload.

#ifndef AMBIDROP_CONTAINER_HPP_
#define AMBIDROP_CONTAINER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ambidrop {

struct Container {
  std::string magic;  // exactly 5 bytes
  nlohmann::json header;
  std::vector<float> payload;
};

void write_container(const Container& c, const std::string& path);

// Throws FormatError on bad magic, truncation, or malformed header.
Container read_container(const std::string& path,
                         const std::string& expected_magic);

}  // namespace ambidrop

#endif  // AMBIDROP_CONTAINER_HPP_
