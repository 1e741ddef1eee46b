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

#include "ambidrop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ambidrop {

namespace {

// Second-order resonator (two-pole bandpass), direct form II.
struct Resonator {
  double b0, a1, a2;
  double z1 = 0.0, z2 = 0.0;

  Resonator(double center_hz, double bandwidth_hz, double sample_rate) {
    const double r = std::exp(-kPi * bandwidth_hz / sample_rate);
    a1 = -2.0 * r * std::cos(kTwoPi * center_hz / sample_rate);
    a2 = r * r;
    b0 = 1.0 - r;
  }

  double process(double x) {
    const double w = x - a1 * z1 - a2 * z2;
    const double y = b0 * w;
    z2 = z1;
    z1 = w;
    return y;
  }
};

void peak_normalize(std::vector<double>* x, double peak) {
  double max_abs = 0.0;
  for (double v : *x) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs > 0.0) {
    const double g = peak / max_abs;
    for (double& v : *x) v *= g;
  }
}

}  // namespace

std::vector<double> synthetic_speech(double duration_seconds,
                                     double sample_rate, std::uint64_t seed) {
  if (duration_seconds <= 0.0 || sample_rate <= 0.0) {
    throw DomainError("duration and sample rate must be positive");
  }
  const std::size_t len = std::size_t(duration_seconds * sample_rate);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> out(len, 0.0);
  std::size_t pos = 0;
  while (pos < len) {
    // Syllable-like burst: 80-250 ms voiced segment, short gap after.
    const std::size_t burst = std::size_t((0.08 + 0.17 * unit(rng)) * sample_rate);
    const std::size_t gap = std::size_t((0.02 + 0.10 * unit(rng)) * sample_rate);
    const double f1 = 300.0 + 500.0 * unit(rng);
    const double f2 = 900.0 + 1300.0 * unit(rng);
    const double f3 = 2300.0 + 1000.0 * unit(rng);
    Resonator r1(f1, 80.0, sample_rate);
    Resonator r2(f2, 120.0, sample_rate);
    Resonator r3(f3, 180.0, sample_rate);
    const double pitch = 90.0 + 120.0 * unit(rng);
    double phase = 0.0;
    const std::size_t end = std::min(len, pos + burst);
    for (std::size_t i = pos; i < end; ++i) {
      // Glottal-ish pulse train plus aspiration noise.
      phase += pitch / sample_rate;
      if (phase >= 1.0) phase -= 1.0;
      const double pulse = phase < 0.1 ? 1.0 - phase / 0.1 : 0.0;
      const double excitation = 0.8 * pulse + 0.2 * gauss(rng);
      const double env = std::sin(kPi * double(i - pos) / double(end - pos));
      out[i] = env * (r1.process(excitation) + 0.6 * r2.process(excitation) +
                      0.3 * r3.process(excitation));
    }
    pos = end + gap;
  }
  peak_normalize(&out, 0.5);
  return out;
}

std::vector<double> filtered_noise(double duration_seconds, double sample_rate,
                                   double center_hz, double bandwidth_hz,
                                   std::uint64_t seed) {
  if (duration_seconds <= 0.0 || sample_rate <= 0.0) {
    throw DomainError("duration and sample rate must be positive");
  }
  const std::size_t len = std::size_t(duration_seconds * sample_rate);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 2);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Resonator filt(center_hz, bandwidth_hz, sample_rate);
  std::vector<double> out(len);
  for (auto& v : out) v = filt.process(gauss(rng));
  peak_normalize(&out, 0.5);
  return out;
}

}  // namespace ambidrop
