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

// Frequency-dependent array steering matrices.  Sign convention: a plane
// wave arriving from DOA unit vector u contributes e^{+i k (r_m . u)} at a
// microphone located at r_m.

#ifndef AMBIDROP_STEERING_HPP_
#define AMBIDROP_STEERING_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/sh.hpp"

namespace ambidrop {

struct FrequencyGrid {
  std::vector<double> frequencies;  // Hz, ascending
  double speed_of_sound = kDefaultSpeedOfSound;

  // One-sided STFT bin grid: fft_size/2 + 1 bins from 0 to sample_rate/2.
  static FrequencyGrid stft_bins(std::size_t fft_size, double sample_rate,
                                 double speed_of_sound = kDefaultSpeedOfSound);

  double wavenumber(std::size_t i) const {
    return kTwoPi * frequencies[i] / speed_of_sound;
  }
};

struct SteeringMatrix {
  std::vector<Eigen::MatrixXcd> per_frequency;  // each M x Q
  DirectionGrid directions;
  FrequencyGrid frequencies;
  std::string array_name;

  std::size_t num_mics() const {
    return per_frequency.empty() ? 0 : std::size_t(per_frequency[0].rows());
  }
  std::size_t num_directions() const { return directions.size(); }
  std::size_t num_frequencies() const { return per_frequency.size(); }
};

// Free-field omnidirectional model: entry (m, q) = e^{i k (r_m . u_q)}.
SteeringMatrix free_field_steering(const ArrayGeometry& array,
                                   const DirectionGrid& grid,
                                   const FrequencyGrid& freqs);

// Binary container (magic "ASMV1"): little-endian, JSON header with
// {M, Q, F, frequencies, directions, array_name}, then F*M*Q complex64
// values in frequency-major, mic-major order.
void export_steering(const SteeringMatrix& steering, const std::string& path);
SteeringMatrix import_measured_steering(const std::string& path);

}  // namespace ambidrop

#endif  // AMBIDROP_STEERING_HPP_
