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

#include "ambidrop/stft.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include <fftw3.h>

#include "ambidrop/simd.hpp"

namespace ambidrop {

namespace {

// RAII wrappers around FFTW plans for one frame size.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(fftw_alloc_real(n)),
        out_(fftw_alloc_complex(n / 2 + 1)),
        fwd_(fftw_plan_dft_r2c_1d(int(n), in_, out_, FFTW_ESTIMATE)),
        inv_(fftw_plan_dft_c2r_1d(int(n), out_, in_, FFTW_ESTIMATE)) {}
  ~RealFft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  void forward(const double* frame, cplx* spectrum) {
    std::memcpy(in_, frame, n_ * sizeof(double));
    fftw_execute(fwd_);
    std::memcpy(spectrum, out_, (n_ / 2 + 1) * sizeof(cplx));
  }

  // Unnormalized c2r; caller divides by n.
  void inverse(const cplx* spectrum, double* frame) {
    std::memcpy(out_, spectrum, (n_ / 2 + 1) * sizeof(cplx));
    fftw_execute(inv_);
    std::memcpy(frame, in_, n_ * sizeof(double));
  }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n)
      : n_(n),
        buf_(fftw_alloc_complex(n)),
        out_(fftw_alloc_complex(n)),
        plan_(fftw_plan_dft_1d(int(n), buf_, out_, FFTW_FORWARD,
                               FFTW_ESTIMATE)) {}
  ~ComplexFft() {
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
    fftw_free(out_);
  }
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  void forward(const cplx* frame, cplx* spectrum_one_sided) {
    std::memcpy(buf_, frame, n_ * sizeof(cplx));
    fftw_execute(plan_);
    std::memcpy(spectrum_one_sided, out_, (n_ / 2 + 1) * sizeof(cplx));
  }

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

void StftConfig::validate() const {
  if (window_length == 0) throw ShapeError("window length must be > 0");
  if (hop == 0 || hop > window_length) {
    throw ShapeError("hop must be in (0, window length]");
  }
  if (fft_size < window_length) {
    throw ShapeError("fft size must be >= window length");
  }
}

std::size_t StftConfig::num_frames(std::size_t num_samples) const {
  if (num_samples <= window_length) return 1;
  return (num_samples - window_length + hop - 1) / hop + 1;
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double c = std::cos(kTwoPi * double(i) / double(length));  // periodic
    w[i] = (kind == WindowKind::kHamming) ? 0.54 - 0.46 * c : 0.5 - 0.5 * c;
  }
  return w;
}

TimeFreqTensor stft_forward(const MultichannelSignal& signals,
                            const StftConfig& cfg) {
  cfg.validate();
  if (signals.num_channels() == 0 || signals.num_samples() == 0) {
    throw ShapeError("empty input to stft_forward");
  }
  const std::size_t len = signals.num_samples();
  const std::size_t frames = cfg.num_frames(len);
  const std::size_t bins = cfg.num_bins();
  const std::vector<double> window = make_window(cfg.window, cfg.window_length);

  TimeFreqTensor tensor;
  tensor.config = cfg;
  tensor.num_channels = signals.num_channels();
  tensor.num_frames = frames;
  tensor.values.resize(tensor.num_channels * frames * bins);

  RealFft fft(cfg.fft_size);
  std::vector<double> frame(cfg.fft_size, 0.0);
  for (std::size_t ch = 0; ch < tensor.num_channels; ++ch) {
    if (signals.channels[ch].size() != len) {
      throw ShapeError("channel lengths differ in stft_forward");
    }
    const double* x = signals.channels[ch].data();
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t start = t * cfg.hop;
      const std::size_t avail =
          start < len ? std::min(cfg.window_length, len - start) : 0;
      std::fill(frame.begin(), frame.end(), 0.0);
      simd::active().mul(x + start, window.data(), frame.data(), avail);
      fft.forward(frame.data(), tensor.frame(ch, t));
    }
  }
  return tensor;
}

TimeFreqTensor stft_forward_complex(const ComplexMultichannel& signals,
                                    const StftConfig& cfg) {
  cfg.validate();
  if (signals.channels.empty() || signals.channels[0].empty()) {
    throw ShapeError("empty input to stft_forward_complex");
  }
  const std::size_t len = signals.channels[0].size();
  const std::size_t frames = cfg.num_frames(len);
  const std::size_t bins = cfg.num_bins();
  const std::vector<double> window = make_window(cfg.window, cfg.window_length);

  TimeFreqTensor tensor;
  tensor.config = cfg;
  tensor.num_channels = signals.channels.size();
  tensor.num_frames = frames;
  tensor.values.resize(tensor.num_channels * frames * bins);

  ComplexFft fft(cfg.fft_size);
  std::vector<cplx> frame(cfg.fft_size);
  for (std::size_t ch = 0; ch < tensor.num_channels; ++ch) {
    if (signals.channels[ch].size() != len) {
      throw ShapeError("channel lengths differ in stft_forward_complex");
    }
    const cplx* x = signals.channels[ch].data();
    for (std::size_t t = 0; t < frames; ++t) {
      const std::size_t start = t * cfg.hop;
      const std::size_t avail =
          start < len ? std::min(cfg.window_length, len - start) : 0;
      std::fill(frame.begin(), frame.end(), cplx(0.0));
      for (std::size_t i = 0; i < avail; ++i) frame[i] = window[i] * x[start + i];
      fft.forward(frame.data(), tensor.frame(ch, t));
    }
  }
  return tensor;
}

MultichannelSignal stft_inverse(const TimeFreqTensor& tensor) {
  const StftConfig& cfg = tensor.config;
  cfg.validate();
  if (tensor.num_channels == 0 || tensor.num_frames == 0) {
    throw ShapeError("empty tensor in stft_inverse");
  }
  if (tensor.values.size() !=
      tensor.num_channels * tensor.num_frames * cfg.num_bins()) {
    throw ShapeError("tensor value count disagrees with its shape");
  }
  const std::size_t out_len = (tensor.num_frames - 1) * cfg.hop + cfg.window_length;
  const std::vector<double> window = make_window(cfg.window, cfg.window_length);

  // Synthesis-weighted overlap-add: frames carry w*x, we weight by w again
  // and divide by the accumulated w^2 so the round trip is exact wherever
  // the window overlap has support.
  std::vector<double> denom(out_len, 0.0);
  for (std::size_t t = 0; t < tensor.num_frames; ++t) {
    for (std::size_t i = 0; i < cfg.window_length; ++i) {
      denom[t * cfg.hop + i] += window[i] * window[i];
    }
  }

  MultichannelSignal out;
  out.sample_rate = cfg.sample_rate;
  out.channels.assign(tensor.num_channels, std::vector<double>(out_len, 0.0));

  RealFft fft(cfg.fft_size);
  std::vector<double> frame(cfg.fft_size);
  std::vector<double> weighted(cfg.window_length);
  const double scale = 1.0 / double(cfg.fft_size);
  for (std::size_t ch = 0; ch < tensor.num_channels; ++ch) {
    double* y = out.channels[ch].data();
    for (std::size_t t = 0; t < tensor.num_frames; ++t) {
      fft.inverse(tensor.frame(ch, t), frame.data());
      simd::active().mul(frame.data(), window.data(), weighted.data(),
                         cfg.window_length);
      simd::active().axpy(scale, weighted.data(), y + t * cfg.hop,
                          cfg.window_length);
    }
    for (std::size_t i = 0; i < out_len; ++i) {
      y[i] = denom[i] > 1e-12 ? y[i] / denom[i] : 0.0;
    }
  }
  return out;
}

}  // namespace ambidrop
