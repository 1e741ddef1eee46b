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

// Self-contained synthetic speech: noise bursts shaped by formant-like
// resonators, for tests and demos when no speech corpus is on hand.

#ifndef AMBIDROP_SYNTH_HPP_
#define AMBIDROP_SYNTH_HPP_

#include <cstdint>
#include <vector>

#include "ambidrop/common.hpp"

namespace ambidrop {

// Deterministic per (seed, duration, rate).  Peak-normalized to 0.5.
std::vector<double> synthetic_speech(double duration_seconds,
                                     double sample_rate, std::uint64_t seed);

// Band-limited noise through one second-order resonator; handy for
// frequency-selective test signals.
std::vector<double> filtered_noise(double duration_seconds, double sample_rate,
                                   double center_hz, double bandwidth_hz,
                                   std::uint64_t seed);

}  // namespace ambidrop

#endif  // AMBIDROP_SYNTH_HPP_
