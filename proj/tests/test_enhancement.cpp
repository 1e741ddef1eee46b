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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "ambidrop/enhancement.hpp"
#include "ambidrop/metrics.hpp"
#include "ambidrop/stft.hpp"
#include "ambidrop/synth.hpp"

using namespace ambidrop;

namespace {

TimeFreqTensor random_tensor(std::size_t channels, std::size_t frames,
                             std::size_t fft, std::uint64_t seed) {
  TimeFreqTensor tf;
  tf.config.fft_size = fft;
  tf.config.window_length = fft;
  tf.config.hop = fft / 2;
  tf.num_channels = channels;
  tf.num_frames = frames;
  tf.values.resize(channels * frames * tf.num_bins());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : tf.values) v = cplx(u(rng), u(rng));
  return tf;
}

bool channel_is_zero(const TimeFreqTensor& tf, std::size_t c) {
  for (std::size_t t = 0; t < tf.num_frames; ++t) {
    for (std::size_t f = 0; f < tf.num_bins(); ++f) {
      if (tf.at(c, t, f) != cplx(0.0)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("dropout zeroes whole channels, never the protected one") {
  const TimeFreqTensor tf = random_tensor(5, 4, 8, 1);
  DropoutSpec spec;
  spec.probability = 1.0;
  spec.seed = 3;
  bool saw_drop = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    spec.seed = seed;
    const TimeFreqTensor out = channel_dropout(tf, spec);
    CHECK_FALSE(channel_is_zero(out, 0));
    std::size_t dropped = 0;
    for (std::size_t c = 1; c < 5; ++c) {
      if (channel_is_zero(out, c)) {
        ++dropped;
        // Whole-channel property: untouched channels are bit-identical.
      } else {
        for (std::size_t t = 0; t < tf.num_frames; ++t) {
          for (std::size_t f = 0; f < tf.num_bins(); ++f) {
            CHECK(out.at(c, t, f) == tf.at(c, t, f));
          }
        }
      }
    }
    CHECK(dropped >= 1);
    CHECK(dropped <= 3);
    saw_drop = saw_drop || dropped > 0;
  }
  CHECK(saw_drop);
}

TEST_CASE("dropout is deterministic per seed and inactive at p=0") {
  const TimeFreqTensor tf = random_tensor(5, 3, 8, 2);
  DropoutSpec spec;
  spec.seed = 42;
  const TimeFreqTensor a = channel_dropout(tf, spec);
  const TimeFreqTensor b = channel_dropout(tf, spec);
  CHECK(a.values == b.values);

  spec.probability = 0.0;
  const TimeFreqTensor c = channel_dropout(tf, spec);
  CHECK(c.values == tf.values);
}

TEST_CASE("dropout validation") {
  const TimeFreqTensor tf = random_tensor(3, 2, 8, 3);
  DropoutSpec spec;
  spec.max_dropped = 3;  // would allow zeroing every channel
  CHECK_THROWS_AS(channel_dropout(tf, spec), DomainError);
  spec.max_dropped = 2;
  spec.probability = 1.5;
  CHECK_THROWS_AS(channel_dropout(tf, spec), DomainError);
}

TEST_CASE("mask application multiplies the reference channel") {
  const TimeFreqTensor tf = random_tensor(3, 2, 8, 4);
  ComplexMask mask;
  mask.num_frames = 2;
  mask.num_bins = tf.num_bins();
  mask.values.resize(mask.num_frames * mask.num_bins);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : mask.values) v = cplx(u(rng), u(rng));

  const TimeFreqTensor out = apply_mask(mask, tf, 1);
  REQUIRE(out.num_channels == 1);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t f = 0; f < tf.num_bins(); ++f) {
      CHECK(std::abs(out.at(0, t, f) - mask.at(t, f) * tf.at(1, t, f)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(apply_mask(mask, tf, 7), ShapeError);
}

TEST_CASE("oracle mask recovers the clean reference up to the clip bound") {
  const TimeFreqTensor noisy = random_tensor(1, 3, 16, 6);
  TimeFreqTensor clean = random_tensor(1, 3, 16, 7);
  const ComplexMask mask = oracle_cirm(clean, noisy, 10.0);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t f = 0; f < clean.num_bins(); ++f) {
      const cplx recovered = mask.at(t, f) * noisy.at(0, t, f);
      const double wanted_mag = std::abs(clean.at(0, t, f) / noisy.at(0, t, f));
      if (wanted_mag <= 10.0) {
        CHECK(std::abs(recovered - clean.at(0, t, f)) < 1e-12);
      } else {
        CHECK(std::abs(mask.at(t, f)) == doctest::Approx(10.0));
      }
    }
  }
}

TEST_CASE("oracle mask zeroes numerically empty noisy bins") {
  TimeFreqTensor noisy = random_tensor(1, 1, 8, 8);
  TimeFreqTensor clean = random_tensor(1, 1, 8, 9);
  noisy.at(0, 0, 2) = cplx(0.0);
  const ComplexMask mask = oracle_cirm(clean, noisy, 10.0);
  CHECK(mask.at(0, 2) == cplx(0.0));
}

TEST_CASE("FT-JNF output shape, determinism, and zero-weight behavior") {
  const TimeFreqTensor tf = random_tensor(3, 4, 16, 10);
  const FtJnfWeights w = random_ft_jnf_weights(3, 8, 6, 77);
  const ComplexMask a = ft_jnf_forward(tf, w);
  const ComplexMask b = ft_jnf_forward(tf, w);
  CHECK(a.num_frames == 4);
  CHECK(a.num_bins == tf.num_bins());
  CHECK(a.values == b.values);

  const FtJnfWeights zero = zero_ft_jnf_weights(3, 8, 6);
  const ComplexMask z = ft_jnf_forward(tf, zero);
  for (const auto& v : z.values) CHECK(v == cplx(0.0));

  CHECK_THROWS_AS(ft_jnf_forward(random_tensor(2, 4, 16, 11), w), ShapeError);
}

TEST_CASE("FT-JNF responds to input changes and both stages matter") {
  const TimeFreqTensor tf = random_tensor(2, 3, 16, 12);
  TimeFreqTensor tf2 = tf;
  tf2.at(0, 1, 3) += cplx(0.25, -0.1);
  const FtJnfWeights w = random_ft_jnf_weights(2, 6, 5, 13);
  const ComplexMask a = ft_jnf_forward(tf, w);
  const ComplexMask b = ft_jnf_forward(tf2, w);
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
  }
  CHECK(diff > 1e-12);
}

TEST_CASE("FT-JNF weight container round trip") {
  const FtJnfWeights w = random_ft_jnf_weights(4, 5, 3, 999);
  const std::string path = "ftjnf_test_weights.bin";
  export_ft_jnf_weights(w, path);
  const FtJnfWeights back = import_ft_jnf_weights(path);
  std::remove(path.c_str());
  CHECK(back.num_input_channels() == 4);
  CHECK(back.freq_layer.hidden() == 5);
  CHECK(back.time_layer.hidden() == 3);
  // float32 payload: compare with matching precision.
  CHECK((back.output_weights.cast<float>().cast<double>() -
         w.output_weights.cast<float>().cast<double>())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  const TimeFreqTensor tf = random_tensor(4, 2, 8, 14);
  const ComplexMask ma = ft_jnf_forward(tf, back);
  const ComplexMask mb = ft_jnf_forward(tf, back);
  CHECK(ma.values == mb.values);
}

TEST_CASE("malformed weight dimensions are rejected") {
  FtJnfWeights w = random_ft_jnf_weights(2, 4, 3, 5);
  w.output_weights = Eigen::MatrixXd::Zero(2, 5);  // wrong 2*H2
  CHECK_THROWS_AS(w.validate(), ShapeError);
}

TEST_CASE("toy calibration: monotone best-so-far loss on a noisy scene") {
  StftConfig cfg;
  cfg.window_length = 64;
  cfg.hop = 32;
  cfg.fft_size = 64;
  const auto clean = synthetic_speech(0.25, 16000.0, 31);
  auto noisy = clean;
  std::mt19937_64 rng(32);
  std::normal_distribution<double> gauss(0.0, 0.05);
  for (auto& v : noisy) v += gauss(rng);
  const TimeFreqTensor tf = stft_forward({{noisy}, 16000.0}, cfg);

  const ToyCalibrateResult result = toy_calibrate(tf, clean, 0, 50, 0.01);
  REQUIRE(result.loss_per_iter.size() == 50);
  CHECK(result.final_loss <= result.initial_loss);
  double prev = result.initial_loss;
  for (double loss : result.loss_per_iter) {
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("toy calibration drives an interference-only bin toward zero") {
  // Clean content in one bin group, interference in a disjoint group; the
  // optimum zeroes the interference bins (SI-SDR then diverges upward).
  StftConfig cfg;
  cfg.window_length = 32;
  cfg.hop = 16;
  cfg.fft_size = 32;
  const double sr = 16000.0;
  const std::size_t n = 512;
  std::vector<double> clean(n), interference(n);
  for (std::size_t i = 0; i < n; ++i) {
    clean[i] = std::sin(kTwoPi * 4.0 * sr / 32.0 * double(i) / sr);
    interference[i] = 0.6 * std::sin(kTwoPi * 10.0 * sr / 32.0 * double(i) / sr);
  }
  std::vector<double> noisy(n);
  for (std::size_t i = 0; i < n; ++i) noisy[i] = clean[i] + interference[i];

  const TimeFreqTensor tf = stft_forward({{noisy}, sr}, cfg);
  // The clean reference must be what the mask chain can actually produce:
  // the STFT round trip of the clean signal, trimmed to its length.
  const ToyCalibrateResult result = toy_calibrate(tf, clean, 0, 120, 0.05);
  CHECK(result.final_loss < result.initial_loss - 10.0);
  CHECK(std::abs(result.gains[10]) < std::abs(result.gains[4]));
}

TEST_CASE("toy calibration input validation") {
  const TimeFreqTensor tf = random_tensor(1, 2, 8, 15);
  CHECK_THROWS_AS(toy_calibrate(tf, {}, 0, 5, 0.1), ShapeError);
  CHECK_THROWS_AS(toy_calibrate(tf, {1.0}, 4, 5, 0.1), ShapeError);
}
