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

// Ambisonics Signal Matching: regularized least-squares design of the
// per-frequency encoding filters, their application in the STFT domain,
// and the closed-form encoding NMSE under the diffuse-field model.

#ifndef AMBIDROP_ASM_CODEC_HPP_
#define AMBIDROP_ASM_CODEC_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/steering.hpp"
#include "ambidrop/stft.hpp"

namespace ambidrop {

struct AsmDesignParams {
  HarmonicSet harmonic_set;
  double snr_db = 30.0;  // design SNR; regularization = 10^(-snr_db/10)

  double regularization() const;
};

struct AsmFilterBank {
  // per_frequency[f] is channels x M; row c holds c_{n_c m_c} at that bin.
  std::vector<Eigen::MatrixXcd> per_frequency;
  HarmonicSet harmonic_set;
  FrequencyGrid frequencies;
  std::string array_name;
  double snr_db = 30.0;

  std::size_t num_mics() const {
    return per_frequency.empty() ? 0 : std::size_t(per_frequency[0].cols());
  }
  std::size_t num_channels() const { return harmonic_set.size(); }
  std::size_t num_frequencies() const { return per_frequency.size(); }
};

// Per frequency and harmonic: c = (V V^H + lambda I)^{-1} V y_nm, with
// lambda = 10^(-snr_db/10).  Throws SolverError naming the offending
// frequency when the regularized system is singular.
AsmFilterBank asm_design(const SteeringMatrix& steering,
                         const AsmDesignParams& params);

// Output channel c at (t, f) = sum_m conj(c[c][m]) X_m(t, f).
TimeFreqTensor asm_apply(const AsmFilterBank& filters,
                         const TimeFreqTensor& mic_tf);

// Closed-form Eq.-style NMSE under the diffuse + spatially-white model:
// (|V^H c - y_nm|^2 + lambda |c|^2) / |y_nm|^2, per frequency.
std::vector<double> asm_nmse(const SteeringMatrix& steering,
                             const AsmFilterBank& filters,
                             const HarmonicIndex& harmonic, double lambda);

enum class Encodability { kPass, kWarn };

// Advisory (N_a + 1)^2 <= M style check on the actual channel count.
Encodability check_encodability(const HarmonicSet& set, std::size_t num_mics);

// Filter bank container (magic "ASMF1"), same layout family as steering.
void export_filter_bank(const AsmFilterBank& bank, const std::string& path);
AsmFilterBank import_filter_bank(const std::string& path);

}  // namespace ambidrop

#endif  // AMBIDROP_ASM_CODEC_HPP_
