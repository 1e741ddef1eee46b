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

// Short-time Fourier transform with weighted overlap-add inverse.  Default
// profile: 32 ms periodic Hamming at 16 kHz (512 samples), 50% overlap.

#ifndef AMBIDROP_STFT_HPP_
#define AMBIDROP_STFT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"
#include "ambidrop/sh.hpp"

namespace ambidrop {

enum class WindowKind { kHamming, kHann };

struct StftConfig {
  std::size_t window_length = 512;
  std::size_t hop = 256;
  WindowKind window = WindowKind::kHamming;
  double sample_rate = 16000.0;
  std::size_t fft_size = 512;

  std::size_t num_bins() const { return fft_size / 2 + 1; }
  std::size_t num_frames(std::size_t num_samples) const;
  void validate() const;
};

// Periodic window of the given kind and length.
std::vector<double> make_window(WindowKind kind, std::size_t length);

struct TimeFreqTensor {
  StftConfig config;
  std::size_t num_channels = 0;
  std::size_t num_frames = 0;
  // Layout: ((channel * num_frames) + frame) * num_bins + bin.
  std::vector<cplx> values;

  std::size_t num_bins() const { return config.num_bins(); }
  cplx* frame(std::size_t channel, std::size_t t) {
    return values.data() + ((channel * num_frames) + t) * num_bins();
  }
  const cplx* frame(std::size_t channel, std::size_t t) const {
    return values.data() + ((channel * num_frames) + t) * num_bins();
  }
  cplx& at(std::size_t channel, std::size_t t, std::size_t f) {
    return values[((channel * num_frames) + t) * num_bins() + f];
  }
  cplx at(std::size_t channel, std::size_t t, std::size_t f) const {
    return values[((channel * num_frames) + t) * num_bins() + f];
  }
};

// One-sided STFT of real multichannel input.
TimeFreqTensor stft_forward(const MultichannelSignal& signals,
                            const StftConfig& cfg);

// One-sided STFT of complex channels: bins 0..fft/2 of the full DFT.  Used
// for ideal Ambisonics channels, which are complex under the complex SH
// convention; matches stft_forward exactly on real input.
TimeFreqTensor stft_forward_complex(const ComplexMultichannel& signals,
                                    const StftConfig& cfg);

// Weighted overlap-add reconstruction assuming Hermitian symmetry (real
// signals).  Output length = (num_frames - 1) * hop + window_length.
MultichannelSignal stft_inverse(const TimeFreqTensor& tensor);

}  // namespace ambidrop

#endif  // AMBIDROP_STFT_HPP_
