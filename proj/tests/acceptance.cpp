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

// Acceptance gate: twelve numbered end-to-end checks, one pass/fail line
// each.  Checks 4 and 6 compare against frozen regression values captured
// from a one-time reference run of this implementation (see the inline
// constants).  Pass the CLI binary path as argv[1] to enable check 12.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ambidrop/asm_codec.hpp"
#include "ambidrop/enhancement.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/metrics.hpp"
#include "ambidrop/room.hpp"
#include "ambidrop/sh.hpp"
#include "ambidrop/steering.hpp"
#include "ambidrop/stft.hpp"
#include "ambidrop/synth.hpp"

using namespace ambidrop;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(int number, const char* label, bool ok, const std::string& detail) {
  std::printf("%s  %2d  %s (%s)\n", ok ? "PASS" : "FAIL", number, label,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Orthonormality of the harmonic basis under quadrature, n <= 4.
void check_orthonormality() {
  const auto start = std::chrono::steady_clock::now();
  const HarmonicSet set = full_set(4);
  const DirectionGrid grid = sphere_grid(12, 24);
  const Eigen::MatrixXcd y = sh_matrix(set, grid);
  Eigen::VectorXd w(long(grid.size()));
  for (std::size_t q = 0; q < grid.size(); ++q) w(long(q)) = (*grid.weights)[q];
  const Eigen::MatrixXcd gram = y.adjoint() * w.asDiagonal() * y;
  const double err =
      (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
          .cwiseAbs()
          .maxCoeff();
  const double elapsed = seconds_since(start);
  report(1, "harmonic basis orthonormal (n <= 4)", err < 1e-6 && elapsed < 5.0,
         fmt("gram error %.2e, %.2f s", err, elapsed));
}

// 2. Encoding design satisfies its normal equations on the full catalog.
void check_design_residuals() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& name : builtin_array_names()) {
    const SteeringMatrix st = free_field_steering(
        builtin_array(name), horizon_grid(360),
        FrequencyGrid::stft_bins(512, 16000.0));
    AsmDesignParams params;
    params.harmonic_set = horizontal_subset(2);
    const AsmFilterBank bank = asm_design(st, params);
    const Eigen::MatrixXcd y = sh_matrix(params.harmonic_set, st.directions);
    const double lambda = params.regularization();
    for (std::size_t f = 0; f < st.num_frequencies(); ++f) {
      const Eigen::MatrixXcd& v = st.per_frequency[f];
      Eigen::MatrixXcd gram = v * v.adjoint();
      gram.diagonal().array() += lambda;
      const Eigen::MatrixXcd rhs = v * y;
      const Eigen::MatrixXcd c = bank.per_frequency[f].transpose();
      worst = std::max(worst, (gram * c - rhs).norm() / rhs.norm());
    }
  }
  const double elapsed = seconds_since(start);
  report(2, "filter design solves 12 arrays x 257 bins x 5 channels",
         worst < 1e-8 && elapsed < 30.0,
         fmt("worst residual %.2e, %.2f s", worst, elapsed));
}

// 3. Closed-form encoding NMSE vs Monte-Carlo simulation.
void check_nmse_monte_carlo() {
  const char* arrays[] = {"random1", "ula_x", "semi_circle_r10"};
  const HarmonicIndex harmonics[] = {{0, 0}, {1, 1}, {2, -2}};
  FrequencyGrid freqs;
  freqs.frequencies = {250.0, 500.0, 1000.0, 2000.0, 4000.0};

  double worst_rel = 0.0;
  std::mt19937_64 rng(314159);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (const char* name : arrays) {
    const SteeringMatrix st =
        free_field_steering(builtin_array(name), horizon_grid(180), freqs);
    AsmDesignParams params;
    params.harmonic_set = horizontal_subset(2);
    const AsmFilterBank bank = asm_design(st, params);
    const double lambda = params.regularization();
    const std::size_t q = st.num_directions();

    for (const HarmonicIndex& h : harmonics) {
      const std::vector<double> closed = asm_nmse(st, bank, h, lambda);
      std::size_t row = 0;
      for (; row < bank.harmonic_set.size(); ++row) {
        if (bank.harmonic_set.indices[row] == h) break;
      }
      Eigen::VectorXcd y(static_cast<long>(q));
      for (std::size_t i = 0; i < q; ++i) {
        y(long(i)) = sh_eval(h, st.directions.directions[i]);
      }
      for (std::size_t f = 0; f < closed.size(); ++f) {
        const Eigen::VectorXcd c =
            bank.per_frequency[f].row(long(row)).transpose();
        // a - a_hat = (y - V^H c)^H s - c^H n: two short dot products per
        // draw instead of a full matrix product.
        const Eigen::VectorXcd d = y - st.per_frequency[f].adjoint() * c;
        const double noise_sigma = std::sqrt(lambda);
        double err_acc = 0.0, ref_acc = 0.0;
        for (int draw = 0; draw < 10000; ++draw) {
          cplx err(0.0), truth(0.0);
          for (std::size_t i = 0; i < q; ++i) {
            const cplx s(gauss(rng), gauss(rng));
            err += std::conj(d(long(i))) * s;
            truth += std::conj(y(long(i))) * s;
          }
          for (long m = 0; m < c.size(); ++m) {
            err -= std::conj(c(m)) * (noise_sigma * cplx(gauss(rng), gauss(rng)));
          }
          err_acc += std::norm(err);
          ref_acc += std::norm(truth);
        }
        const double mc = err_acc / ref_acc;
        worst_rel = std::max(worst_rel, std::abs(mc - closed[f]) / closed[f]);
      }
    }
  }
  report(3, "closed-form NMSE matches 10^4-draw Monte-Carlo",
         worst_rel < 0.05, fmt("worst relative gap %.3f", worst_rel));
}

// 4. Geometry determines which harmonics an array can encode.  Band and
// thresholds frozen from the reference run: over 125..968.75 Hz (bins 4..31)
// ula_y's worst subset harmonic reaches -2.86 dB while full_circle_r10 keeps
// every subset harmonic at or below -10.38 dB.
void check_encodability_phenomenon() {
  auto band_max_per_harmonic = [](const std::string& name) {
    const SteeringMatrix st = free_field_steering(
        builtin_array(name), horizon_grid(360),
        FrequencyGrid::stft_bins(512, 16000.0));
    AsmDesignParams params;
    params.harmonic_set = horizontal_subset(2);
    const AsmFilterBank bank = asm_design(st, params);
    std::vector<double> maxima;
    for (const auto& h : params.harmonic_set.indices) {
      if (h.n == 0) continue;
      const auto nmse = asm_nmse(st, bank, h, params.regularization());
      double hmax = -std::numeric_limits<double>::infinity();
      for (std::size_t b = 4; b <= 31; ++b) {
        hmax = std::max(hmax, 10.0 * std::log10(nmse[b]));
      }
      maxima.push_back(hmax);
    }
    return maxima;
  };

  const auto ula = band_max_per_harmonic("ula_y");
  const auto circle = band_max_per_harmonic("full_circle_r10");
  const double ula_worst = *std::max_element(ula.begin(), ula.end());
  const double circle_worst = *std::max_element(circle.begin(), circle.end());
  report(4, "line array fails m=+/-n harmonics, circle encodes all",
         ula_worst > -3.0 && circle_worst < -10.0,
         fmt("ula_y worst %.2f dB (> -3), full_circle_r10 worst %.2f dB (< -10)",
             ula_worst, circle_worst));
}

// 5. STFT round trip.
void check_stft_round_trip() {
  StftConfig cfg;
  auto rel_err = [&](const std::vector<double>& x) {
    const TimeFreqTensor tf = stft_forward({{x}, cfg.sample_rate}, cfg);
    const MultichannelSignal back = stft_inverse(tf);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += (back.channels[0][i] - x[i]) * (back.channels[0][i] - x[i]);
      den += x[i] * x[i];
    }
    return std::sqrt(num / den);
  };
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(48000);
  for (auto& v : noise) v = gauss(rng);
  const double noise_err = rel_err(noise);
  const double speech_err = rel_err(synthetic_speech(3.0, 16000.0, 12));
  report(5, "STFT round trip (512/256 Hamming, 16 kHz)",
         noise_err < 1e-8 && speech_err < 1e-8,
         fmt("noise %.2e, speech %.2e", noise_err, speech_err));
}

// 6. The ideal-Ambisonics chain and the mic+encoding chain describe the same
// field.  Threshold frozen from the reference run (measured 36.4 dB on this
// scene, band limited to bins 1..31, below the array's spatial aliasing).
void check_cross_chain() {
  SceneSpec scene;
  scene.array = builtin_array("full_circle_r10");
  scene.array_center = {3.0, 2.5, 1.5};
  scene.room.max_image_order = 0;
  scene.snr_db = std::numeric_limits<double>::infinity();
  SceneSource src;
  src.position = {1.2, 3.6, 1.5};
  src.signal = synthetic_speech(2.0, 16000.0, 11);
  scene.sources.push_back(src);

  const HarmonicSet set = horizontal_subset(2);
  const AmbisonicsRender ideal = render_ideal_ambisonics(scene, set);
  const MicRender mics = render_mics(scene);

  StftConfig cfg;
  const SteeringMatrix st = free_field_steering(
      scene.array, horizon_grid(360), FrequencyGrid::stft_bins(512, 16000.0));
  AsmDesignParams params;
  params.harmonic_set = set;
  const AsmFilterBank bank = asm_design(st, params);
  const TimeFreqTensor est = asm_apply(bank, stft_forward(mics.mics, cfg));
  const TimeFreqTensor ref = stft_forward_complex(ideal.channels, cfg);

  const std::size_t frames = std::min(est.num_frames, ref.num_frames);
  TimeFreqTensor a, b;
  a.config = cfg;
  a.num_channels = 1;
  a.num_frames = frames;
  a.values.assign(frames * cfg.num_bins(), cplx(0.0));
  b = a;
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 1; f <= 31; ++f) {
      a.at(0, t, f) = est.at(0, t, f);
      b.at(0, t, f) = ref.at(0, t, f);
    }
  }
  MultichannelSignal sa = stft_inverse(a);
  MultichannelSignal sb = stft_inverse(b);
  const double sdr = si_sdr(sb.channels[0], sa.channels[0]).value_db;
  report(6, "cross-chain a00 agreement below spatial aliasing", sdr >= 30.0,
         fmt("SI-SDR %.2f dB (frozen floor 30.0)", sdr));
}

// 7. Dropout statistics.
void check_dropout_statistics() {
  TimeFreqTensor tf;
  tf.config.fft_size = 8;
  tf.config.window_length = 8;
  tf.config.hop = 4;
  tf.num_channels = 5;
  tf.num_frames = 1;
  tf.values.assign(5 * 1 * 5, cplx(1.0, -1.0));

  DropoutSpec spec;
  spec.probability = 0.4;
  spec.max_dropped = 3;
  std::size_t events = 0;
  bool protected_hit = false;
  const int calls = 100000;
  for (int i = 0; i < calls; ++i) {
    spec.seed = std::uint64_t(i);
    const TimeFreqTensor out = channel_dropout(tf, spec);
    bool any = false;
    for (std::size_t c = 0; c < 5; ++c) {
      bool zero = true;
      for (std::size_t k = 0; k < 5; ++k) {
        if (out.at(c, 0, k) != cplx(0.0)) zero = false;
      }
      if (zero) {
        any = true;
        if (c == 0) protected_hit = true;
      }
    }
    if (any) ++events;
  }
  const double rate = double(events) / double(calls);
  report(7, "dropout event rate and protected channel",
         rate >= 0.39 && rate <= 0.41 && !protected_hit,
         fmt("rate %.4f, protected zeroed: %s", rate,
             protected_hit ? "yes" : "no"));
}

// 8. SI-SDR properties.
void check_si_sdr_properties() {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> ref(4096), est(4096);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    ref[i] = gauss(rng);
    est[i] = ref[i] + 0.2 * gauss(rng);
  }
  const double base = si_sdr(ref, est).value_db;
  double worst_gap = 0.0;
  bool pow2_exact = true;
  for (double g : {0.25, 0.5, 2.0, 8.0}) {
    auto scaled = est;
    for (auto& v : scaled) v *= g;
    const double got = si_sdr(ref, scaled).value_db;
    if (got != base) pow2_exact = false;
    worst_gap = std::max(worst_gap, std::abs(got - base));
  }
  for (double g : {0.013, 3.7, -41.0}) {
    auto scaled = est;
    for (auto& v : scaled) v *= g;
    worst_gap = std::max(worst_gap, std::abs(si_sdr(ref, scaled).value_db - base));
  }

  std::vector<double> orth_ref(1024, 0.0), orth_est(1024, 1.0);
  for (std::size_t i = 0; i < orth_ref.size(); i += 2) orth_ref[i] = 1.0;
  const double zero_db = si_sdr(orth_ref, orth_est).value_db;

  report(8, "SI-SDR scale invariance and orthogonal 0 dB case",
         pow2_exact && worst_gap < 1e-9 && std::abs(zero_db) < 1e-9,
         fmt("pow2 exact: %s, worst gap %.1e, orthogonal case %+.1e dB",
             pow2_exact ? "yes" : "no", worst_gap, zero_db));
}

// 9. End-to-end oracle enhancement on reverberant multi-speaker scenes.
void check_oracle_enhancement() {
  const auto start = std::chrono::steady_clock::now();
  StftConfig cfg;
  const HarmonicSet set = horizontal_subset(2);
  double sum_improvement = 0.0;
  bool every_scene_improved = true;
  const int scenes = 10;
  for (int scene_id = 0; scene_id < scenes; ++scene_id) {
    SceneSpec scene;
    scene.array = builtin_array(scene_id % 2 == 0 ? "full_circle_r10"
                                                  : "random2");
    scene.array_center = {3.0, 2.5, 1.5};
    scene.room.max_image_order = 3;
    scene.snr_db = 30.0;
    scene.seed = std::uint64_t(scene_id) + 1;

    std::mt19937_64 rng(std::uint64_t(scene_id) * 7919 + 3);
    std::uniform_real_distribution<double> ux(0.5, 5.5), uy(0.5, 4.5),
        uz(1.2, 2.0);
    for (int s = 0; s < 6; ++s) {
      SceneSource src;
      src.position = {ux(rng), uy(rng), uz(rng)};
      src.signal = synthetic_speech(
          2.0, 16000.0, std::uint64_t(scene_id) * 100 + std::uint64_t(s));
      scene.sources.push_back(std::move(src));
    }

    const AmbisonicsRender render = render_ideal_ambisonics(scene, set);
    const std::size_t len = scene.sources[0].signal.size();
    std::vector<double> clean = render.clean_reference;
    clean.resize(len);

    ComplexMultichannel a00;
    a00.channels = {render.channels.channels[0]};
    a00.channels[0].resize(len);
    const TimeFreqTensor noisy_tf = stft_forward_complex(a00, cfg);
    const TimeFreqTensor clean_tf = stft_forward({{clean}, 16000.0}, cfg);

    const ComplexMask oracle = oracle_cirm(clean_tf, noisy_tf, 10.0);
    const TimeFreqTensor enhanced_tf = apply_mask(oracle, noisy_tf, 0);
    MultichannelSignal enhanced = stft_inverse(enhanced_tf);
    enhanced.channels[0].resize(len);

    ComplexMask unit;
    unit.num_frames = noisy_tf.num_frames;
    unit.num_bins = noisy_tf.num_bins();
    unit.values.assign(unit.num_frames * unit.num_bins, cplx(1.0));
    MultichannelSignal noisy = stft_inverse(apply_mask(unit, noisy_tf, 0));
    noisy.channels[0].resize(len);

    const double noisy_db = si_sdr(clean, noisy.channels[0]).value_db;
    const double enhanced_db = si_sdr(clean, enhanced.channels[0]).value_db;
    const double improvement = enhanced_db - noisy_db;
    if (improvement <= 0.0) every_scene_improved = false;
    sum_improvement += improvement;
  }
  const double mean = sum_improvement / double(scenes);
  const double elapsed = seconds_since(start);
  report(9, "oracle mask improves every reverberant scene",
         every_scene_improved && mean > 10.0 && elapsed < 120.0,
         fmt("mean improvement %.2f dB, all improved: %s, %.1f s", mean,
             every_scene_improved ? "yes" : "no", elapsed));
}

// 10. Network forward pass contracts at the published sizes.
void check_ft_jnf() {
  TimeFreqTensor tf;
  tf.config.fft_size = 16;
  tf.config.window_length = 16;
  tf.config.hop = 8;
  tf.num_channels = 5;
  tf.num_frames = 3;
  tf.values.resize(5 * 3 * 9);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : tf.values) v = cplx(u(rng), u(rng));

  const FtJnfWeights w = random_ft_jnf_weights(5, 256, 128, 42, 0.05);
  const ComplexMask m1 = ft_jnf_forward(tf, w);
  const ComplexMask m2 = ft_jnf_forward(tf, w);
  const bool shape_ok = m1.num_frames == 3 && m1.num_bins == 9;
  const bool deterministic = m1.values == m2.values;

  const ComplexMask zero = ft_jnf_forward(tf, zero_ft_jnf_weights(5, 256, 128));
  bool zero_ok = true;
  for (const auto& v : zero.values) {
    if (v != cplx(0.0)) zero_ok = false;
  }

  // Frozen regression values from the reference run (seeds 42/7 above).
  const cplx expect_0_0(-0.01279074822865206, 0.0213721303289299);
  const cplx expect_1_4(-0.013029823129593953, 0.023874198173494905);
  const cplx expect_2_8(-0.017093911513586673, 0.023458871565267572);
  const double reg_err = std::max(
      {std::abs(m1.at(0, 0) - expect_0_0), std::abs(m1.at(1, 4) - expect_1_4),
       std::abs(m1.at(2, 8) - expect_2_8)});
  report(10, "FT-JNF shapes, determinism, zero weights, regression",
         shape_ok && deterministic && zero_ok && reg_err < 1e-12,
         fmt("regression error %.1e", reg_err));
}

// 11. Finite-difference calibration: monotone trajectory and the scalar
// synthetic case with a known optimum (interference-only bin -> gain 0).
void check_toy_calibration() {
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
  const ToyCalibrateResult run = toy_calibrate(tf, clean, 0, 50, 0.01);
  bool monotone = run.final_loss <= run.initial_loss;
  double prev = run.initial_loss;
  for (double loss : run.loss_per_iter) {
    if (loss > prev + 1e-12) monotone = false;
    prev = loss;
  }

  // Scalar case: clean lives in bin 4, interference in bin 2; the analytic
  // optimum zeroes the bin-2 gain.
  StftConfig small;
  small.window_length = 16;
  small.hop = 8;
  small.fft_size = 16;
  TimeFreqTensor clean_tf;
  clean_tf.config = small;
  clean_tf.num_channels = 1;
  clean_tf.num_frames = 24;
  clean_tf.values.assign(24 * 9, cplx(0.0));
  TimeFreqTensor noisy_tf = clean_tf;
  std::mt19937_64 rng2(5);
  std::uniform_real_distribution<double> u(0.4, 1.0);
  for (std::size_t t = 0; t < 24; ++t) {
    const cplx sig(u(rng2), u(rng2));
    const cplx intf(0.5 * u(rng2), -0.5 * u(rng2));
    clean_tf.at(0, t, 4) = sig;
    noisy_tf.at(0, t, 4) = sig;
    noisy_tf.at(0, t, 2) = intf;
  }
  const MultichannelSignal clean_sig = stft_inverse(clean_tf);
  const ToyCalibrateResult scalar =
      toy_calibrate(noisy_tf, clean_sig.channels[0], 0, 200, 0.05);
  const double residual_gain = std::abs(scalar.gains[2]);
  report(11, "calibration is monotone and finds the scalar optimum",
         monotone && residual_gain < 1e-3,
         fmt("monotone: %s, interference gain %.1e (optimum 0)",
             monotone ? "yes" : "no", residual_gain));
}

// 12. Scene generation is byte-identical for a fixed seed (via the CLI).
void check_reproducibility(const char* cli_path) {
  if (cli_path == nullptr) {
    report(12, "scene generation reproducibility", false,
           "CLI path not supplied");
    return;
  }
  auto run = [&](const std::string& dir) {
    const std::string cmd = std::string(cli_path) +
                            " scene-generate --seed 123 --array random4"
                            " --duration 1.5 --speakers 3 --out " +
                            dir + " > /dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  const std::string dir1 = "accept_scene_a", dir2 = "accept_scene_b";
  if (!run(dir1) || !run(dir2)) {
    report(12, "scene generation reproducibility", false, "CLI run failed");
    return;
  }
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  bool identical = true;
  for (const char* file : {"mics.wav", "ambisonics.wav", "clean_mic.wav",
                           "clean_a00.wav", "manifest.json"}) {
    const std::string a = slurp(dir1 + "/" + file);
    const std::string b = slurp(dir2 + "/" + file);
    if (a.empty() || a != b) identical = false;
  }
  report(12, "scene generation reproducibility", identical,
         identical ? "all five files byte-identical" : "outputs differ");
}

}  // namespace

int main(int argc, char** argv) {
  check_orthonormality();
  check_design_residuals();
  check_nmse_monte_carlo();
  check_encodability_phenomenon();
  check_stft_round_trip();
  check_cross_chain();
  check_dropout_statistics();
  check_si_sdr_properties();
  check_oracle_enhancement();
  check_ft_jnf();
  check_toy_calibration();
  check_reproducibility(argc > 1 ? argv[1] : nullptr);

  if (g_failures > 0) {
    std::printf("%d of 12 checks failed\n", g_failures);
    return 1;
  }
  std::printf("all 12 checks passed\n");
  return 0;
}
