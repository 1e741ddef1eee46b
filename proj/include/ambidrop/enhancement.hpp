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

// The enhancement chain: channel-wise dropout, complex-mask application,
// oracle complex-ratio masks, forward-only FT-JNF inference, and a small
// finite-difference calibrator driven by the SI-SDR loss.

#ifndef AMBIDROP_ENHANCEMENT_HPP_
#define AMBIDROP_ENHANCEMENT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/stft.hpp"

namespace ambidrop {

struct DropoutSpec {
  double probability = 0.4;       // chance any channels are dropped per call
  std::size_t max_dropped = 3;    // dropped count drawn uniformly in 1..max
  std::vector<std::size_t> protected_channels = {0};
  std::uint64_t seed = 0;
};

// With the spec's probability, zeroes 1..max_dropped distinct non-protected
// channels; otherwise passes through.  Deterministic given the seed.
TimeFreqTensor channel_dropout(const TimeFreqTensor& tf,
                               const DropoutSpec& spec);

struct ComplexMask {
  std::size_t num_frames = 0;
  std::size_t num_bins = 0;
  std::vector<cplx> values;  // frame-major
  double clip_bound = 10.0;

  cplx& at(std::size_t t, std::size_t f) { return values[t * num_bins + f]; }
  cplx at(std::size_t t, std::size_t f) const {
    return values[t * num_bins + f];
  }
};

// Elementwise product of the mask with the reference channel.
TimeFreqTensor apply_mask(const ComplexMask& mask, const TimeFreqTensor& tf,
                          std::size_t ref_channel);

// clean/noisy per bin, magnitude clipped; bins with |noisy| < 1e-12 get 0.
ComplexMask oracle_cirm(const TimeFreqTensor& clean_ref,
                        const TimeFreqTensor& noisy_ref, double clip_bound,
                        std::size_t channel = 0);

// One direction of one LSTM layer.  Gate order i, f, g, o; the stacked
// matrices have 4*hidden rows.
struct LstmDirection {
  Eigen::MatrixXd input_weights;      // 4H x input
  Eigen::MatrixXd recurrent_weights;  // 4H x H
  Eigen::VectorXd bias;               // 4H
};

struct BlstmLayer {
  LstmDirection forward;
  LstmDirection backward;

  std::size_t hidden() const {
    return std::size_t(forward.recurrent_weights.cols());
  }
  std::size_t input_size() const {
    return std::size_t(forward.input_weights.cols());
  }
};

struct FtJnfWeights {
  BlstmLayer freq_layer;   // runs along the frequency axis, per frame
  BlstmLayer time_layer;   // runs along the time axis, per bin
  Eigen::MatrixXd output_weights;  // 2 x 2*H2
  Eigen::VectorXd output_bias;     // 2

  std::size_t num_input_channels() const { return freq_layer.input_size() / 2; }
  void validate() const;
};

// Deterministic FT-JNF forward pass: BLSTM over frequency per frame (input
// 2C re/im features per bin), BLSTM over time per bin, then a linear map to
// the (re, im) mask.  When disable_time_stage is set, the second recurrence
// is replaced by identity pass-through of the first stage's features
// (testing hook).
ComplexMask ft_jnf_forward(const TimeFreqTensor& tf,
                           const FtJnfWeights& weights,
                           bool disable_time_stage = false);

// Zero-initialized weights of the given dimensions.
FtJnfWeights zero_ft_jnf_weights(std::size_t channels, std::size_t h1,
                                 std::size_t h2);
// Deterministic pseudorandom weights for regression fixtures.
FtJnfWeights random_ft_jnf_weights(std::size_t channels, std::size_t h1,
                                   std::size_t h2, std::uint64_t seed,
                                   double scale = 0.1);

// Weight container (magic "FTJW1").
void export_ft_jnf_weights(const FtJnfWeights& weights, const std::string& path);
FtJnfWeights import_ft_jnf_weights(const std::string& path);

struct ToyCalibrateResult {
  std::vector<cplx> gains;            // per-frequency complex gains
  std::vector<double> loss_per_iter;  // negative SI-SDR after each iteration
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Gradient descent with central finite differences through the full
// mask -> ISTFT -> SI-SDR pipeline on per-frequency complex gains.
// Throws Error on divergence (non-finite loss).
ToyCalibrateResult toy_calibrate(const TimeFreqTensor& noisy_tf,
                                 const std::vector<double>& clean_reference,
                                 std::size_t ref_channel, int iterations,
                                 double step);

}  // namespace ambidrop

#endif  // AMBIDROP_ENHANCEMENT_HPP_
