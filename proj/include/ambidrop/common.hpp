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

#ifndef AMBIDROP_COMMON_HPP_
#define AMBIDROP_COMMON_HPP_

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambidrop {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPi = 4.0 * kPi;
inline constexpr double kDefaultSpeedOfSound = 343.0;  // m/s

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unknown catalog identifier.
class CatalogError : public Error {
 public:
  using Error::Error;
};

// Mismatched or invalid dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Linear solve failure (names the offending frequency).
class SolverError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Multichannel time-domain audio: signal[channel][sample].
struct MultichannelSignal {
  std::vector<std::vector<double>> channels;
  double sample_rate = 16000.0;

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_samples() const {
    return channels.empty() ? 0 : channels[0].size();
  }
};

}  // namespace ambidrop

#endif  // AMBIDROP_COMMON_HPP_
