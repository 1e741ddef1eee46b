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

#include "ambidrop/enhancement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ambidrop/container.hpp"
#include "ambidrop/metrics.hpp"
#include "ambidrop/simd.hpp"

namespace ambidrop {

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}

// One BLSTM direction over a batched sequence.  inputs[step] is
// (input_size x batch); returns hidden states (hidden x batch) per step.
std::vector<Eigen::MatrixXd> lstm_direction(
    const LstmDirection& dir, const std::vector<Eigen::MatrixXd>& inputs,
    bool reverse) {
  const std::size_t steps = inputs.size();
  const Eigen::Index hidden = dir.recurrent_weights.cols();
  const Eigen::Index batch = inputs.empty() ? 0 : inputs[0].cols();
  std::vector<Eigen::MatrixXd> outputs(steps);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(hidden, batch);
  Eigen::MatrixXd cell = Eigen::MatrixXd::Zero(hidden, batch);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t idx = reverse ? steps - 1 - s : s;
    Eigen::MatrixXd z = dir.input_weights * inputs[idx] +
                        dir.recurrent_weights * h;
    z.colwise() += dir.bias;
    const Eigen::ArrayXXd i = sigmoid(z.topRows(hidden).array());
    const Eigen::ArrayXXd f = sigmoid(z.middleRows(hidden, hidden).array());
    const Eigen::ArrayXXd g = z.middleRows(2 * hidden, hidden).array().tanh();
    const Eigen::ArrayXXd o = sigmoid(z.bottomRows(hidden).array());
    cell = (f * cell.array() + i * g).matrix();
    h = (o * cell.array().tanh()).matrix();
    outputs[idx] = h;
  }
  return outputs;
}

// Concatenated forward/backward hidden states per step (2H x batch).
std::vector<Eigen::MatrixXd> blstm(const BlstmLayer& layer,
                                   const std::vector<Eigen::MatrixXd>& inputs) {
  const auto fwd = lstm_direction(layer.forward, inputs, false);
  const auto bwd = lstm_direction(layer.backward, inputs, true);
  std::vector<Eigen::MatrixXd> out(inputs.size());
  const Eigen::Index hidden = Eigen::Index(layer.hidden());
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    out[s].resize(2 * hidden, inputs[s].cols());
    out[s].topRows(hidden) = fwd[s];
    out[s].bottomRows(hidden) = bwd[s];
  }
  return out;
}

void check_direction(const LstmDirection& dir, std::size_t input_size,
                     std::size_t hidden, const std::string& what) {
  if (dir.input_weights.rows() != Eigen::Index(4 * hidden) ||
      dir.input_weights.cols() != Eigen::Index(input_size) ||
      dir.recurrent_weights.rows() != Eigen::Index(4 * hidden) ||
      dir.recurrent_weights.cols() != Eigen::Index(hidden) ||
      dir.bias.size() != Eigen::Index(4 * hidden)) {
    throw ShapeError("inconsistent LSTM weight dimensions in " + what);
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

TimeFreqTensor channel_dropout(const TimeFreqTensor& tf,
                               const DropoutSpec& spec) {
  if (spec.probability < 0.0 || spec.probability > 1.0) {
    throw DomainError("dropout probability must lie in [0, 1]");
  }
  if (spec.max_dropped >= tf.num_channels) {
    throw DomainError("max dropped channels must be < channel count");
  }
  for (std::size_t p : spec.protected_channels) {
    if (p >= tf.num_channels) throw ShapeError("protected channel out of range");
  }
  TimeFreqTensor out = tf;
  std::mt19937_64 rng(splitmix64(spec.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) >= spec.probability || spec.max_dropped == 0) return out;

  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < tf.num_channels; ++c) {
    if (std::find(spec.protected_channels.begin(),
                  spec.protected_channels.end(),
                  c) == spec.protected_channels.end()) {
      candidates.push_back(c);
    }
  }
  if (candidates.empty()) return out;
  const std::size_t limit = std::min(spec.max_dropped, candidates.size());
  std::uniform_int_distribution<std::size_t> count_dist(1, limit);
  const std::size_t drop_count = count_dist(rng);
  // Partial Fisher-Yates over the candidate list.
  for (std::size_t i = 0; i < drop_count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[pick(rng)]);
  }
  const std::size_t span = out.num_frames * out.num_bins();
  for (std::size_t i = 0; i < drop_count; ++i) {
    cplx* base = out.values.data() + candidates[i] * span;
    std::fill(base, base + span, cplx(0.0));
  }
  return out;
}

TimeFreqTensor apply_mask(const ComplexMask& mask, const TimeFreqTensor& tf,
                          std::size_t ref_channel) {
  if (ref_channel >= tf.num_channels) {
    throw ShapeError("reference channel out of range");
  }
  if (mask.num_frames != tf.num_frames || mask.num_bins != tf.num_bins()) {
    throw ShapeError("mask shape does not match tensor");
  }
  TimeFreqTensor out;
  out.config = tf.config;
  out.num_channels = 1;
  out.num_frames = tf.num_frames;
  out.values.resize(tf.num_frames * tf.num_bins());
  for (std::size_t t = 0; t < tf.num_frames; ++t) {
    simd::active().cmul(mask.values.data() + t * mask.num_bins,
                        tf.frame(ref_channel, t), out.frame(0, t),
                        mask.num_bins);
  }
  return out;
}

ComplexMask oracle_cirm(const TimeFreqTensor& clean_ref,
                        const TimeFreqTensor& noisy_ref, double clip_bound,
                        std::size_t channel) {
  if (clean_ref.num_frames != noisy_ref.num_frames ||
      clean_ref.num_bins() != noisy_ref.num_bins()) {
    throw ShapeError("clean/noisy tensor shapes differ");
  }
  if (channel >= clean_ref.num_channels || channel >= noisy_ref.num_channels) {
    throw ShapeError("channel out of range");
  }
  ComplexMask mask;
  mask.num_frames = clean_ref.num_frames;
  mask.num_bins = clean_ref.num_bins();
  mask.clip_bound = clip_bound;
  mask.values.resize(mask.num_frames * mask.num_bins);
  for (std::size_t t = 0; t < mask.num_frames; ++t) {
    const cplx* clean = clean_ref.frame(channel, t);
    const cplx* noisy = noisy_ref.frame(channel, t);
    for (std::size_t f = 0; f < mask.num_bins; ++f) {
      cplx m(0.0);
      if (std::abs(noisy[f]) >= 1e-12) {
        m = clean[f] / noisy[f];
        const double mag = std::abs(m);
        if (mag > clip_bound) m *= clip_bound / mag;
      }
      mask.at(t, f) = m;
    }
  }
  return mask;
}

void FtJnfWeights::validate() const {
  const std::size_t h1 = freq_layer.hidden();
  const std::size_t h2 = time_layer.hidden();
  check_direction(freq_layer.forward, freq_layer.input_size(), h1,
                  "frequency stage (forward)");
  check_direction(freq_layer.backward, freq_layer.input_size(), h1,
                  "frequency stage (backward)");
  check_direction(time_layer.forward, 2 * h1, h2, "time stage (forward)");
  check_direction(time_layer.backward, 2 * h1, h2, "time stage (backward)");
  if (freq_layer.input_size() % 2 != 0) {
    throw ShapeError("frequency stage input size must be 2 * channels");
  }
  if (output_weights.rows() != 2 ||
      output_weights.cols() != Eigen::Index(2 * h2) ||
      output_bias.size() != 2) {
    throw ShapeError("output layer dimensions inconsistent");
  }
}

ComplexMask ft_jnf_forward(const TimeFreqTensor& tf, const FtJnfWeights& weights,
                           bool disable_time_stage) {
  if (!disable_time_stage) weights.validate();
  if (weights.num_input_channels() != tf.num_channels) {
    throw ShapeError("tensor channel count does not match network input size");
  }
  const std::size_t frames = tf.num_frames;
  const std::size_t bins = tf.num_bins();
  const std::size_t channels = tf.num_channels;

  // Stage 1: recurrence along frequency, batched over frames.
  std::vector<Eigen::MatrixXd> freq_inputs(bins);
  for (std::size_t f = 0; f < bins; ++f) {
    Eigen::MatrixXd u(2 * channels, frames);
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t c = 0; c < channels; ++c) {
        const cplx v = tf.at(c, t, f);
        u(Eigen::Index(2 * c), Eigen::Index(t)) = v.real();
        u(Eigen::Index(2 * c + 1), Eigen::Index(t)) = v.imag();
      }
    }
    freq_inputs[f] = std::move(u);
  }
  const std::vector<Eigen::MatrixXd> stage1 = blstm(weights.freq_layer, freq_inputs);

  // Stage 2: recurrence along time, batched over bins.
  std::vector<Eigen::MatrixXd> features(bins);
  if (disable_time_stage) {
    features = stage1;
  } else {
    std::vector<Eigen::MatrixXd> time_inputs(frames);
    const Eigen::Index feat1 = stage1[0].rows();
    for (std::size_t t = 0; t < frames; ++t) {
      Eigen::MatrixXd u(feat1, bins);
      for (std::size_t f = 0; f < bins; ++f) u.col(Eigen::Index(f)) = stage1[f].col(Eigen::Index(t));
      time_inputs[t] = std::move(u);
    }
    const std::vector<Eigen::MatrixXd> stage2 = blstm(weights.time_layer, time_inputs);
    // Back to bin-major layout.
    const Eigen::Index feat2 = stage2[0].rows();
    for (std::size_t f = 0; f < bins; ++f) {
      features[f].resize(feat2, frames);
      for (std::size_t t = 0; t < frames; ++t) {
        features[f].col(Eigen::Index(t)) = stage2[t].col(Eigen::Index(f));
      }
    }
  }

  if (weights.output_weights.cols() != features[0].rows()) {
    throw ShapeError("output layer does not match feature size");
  }
  ComplexMask mask;
  mask.num_frames = frames;
  mask.num_bins = bins;
  mask.values.resize(frames * bins);
  for (std::size_t f = 0; f < bins; ++f) {
    Eigen::MatrixXd out = weights.output_weights * features[f];  // 2 x frames
    out.colwise() += weights.output_bias;
    for (std::size_t t = 0; t < frames; ++t) {
      mask.at(t, f) = cplx(out(0, Eigen::Index(t)), out(1, Eigen::Index(t)));
    }
  }
  return mask;
}

FtJnfWeights zero_ft_jnf_weights(std::size_t channels, std::size_t h1,
                                 std::size_t h2) {
  auto zero_dir = [](std::size_t input, std::size_t hidden) {
    LstmDirection dir;
    dir.input_weights = Eigen::MatrixXd::Zero(4 * hidden, input);
    dir.recurrent_weights = Eigen::MatrixXd::Zero(4 * hidden, hidden);
    dir.bias = Eigen::VectorXd::Zero(4 * hidden);
    return dir;
  };
  FtJnfWeights w;
  w.freq_layer.forward = zero_dir(2 * channels, h1);
  w.freq_layer.backward = zero_dir(2 * channels, h1);
  w.time_layer.forward = zero_dir(2 * h1, h2);
  w.time_layer.backward = zero_dir(2 * h1, h2);
  w.output_weights = Eigen::MatrixXd::Zero(2, 2 * h2);
  w.output_bias = Eigen::VectorXd::Zero(2);
  return w;
}

FtJnfWeights random_ft_jnf_weights(std::size_t channels, std::size_t h1,
                                   std::size_t h2, std::uint64_t seed,
                                   double scale) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(-scale, scale);
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = unit(rng);
    }
  };
  FtJnfWeights w = zero_ft_jnf_weights(channels, h1, h2);
  for (BlstmLayer* layer : {&w.freq_layer, &w.time_layer}) {
    for (LstmDirection* dir : {&layer->forward, &layer->backward}) {
      fill(dir->input_weights);
      fill(dir->recurrent_weights);
      for (Eigen::Index i = 0; i < dir->bias.size(); ++i) {
        dir->bias(i) = unit(rng);
      }
    }
  }
  fill(w.output_weights);
  for (Eigen::Index i = 0; i < w.output_bias.size(); ++i) {
    w.output_bias(i) = unit(rng);
  }
  return w;
}

void export_ft_jnf_weights(const FtJnfWeights& weights,
                           const std::string& path) {
  weights.validate();
  Container c;
  c.magic = "FTJW1";
  c.header["C"] = weights.num_input_channels();
  c.header["H1"] = weights.freq_layer.hidden();
  c.header["H2"] = weights.time_layer.hidden();
  c.header["gate_order"] = "ifgo";
  auto push_matrix = [&](const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        c.payload.push_back(float(m(i, j)));
      }
    }
  };
  auto push_vector = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) c.payload.push_back(float(v(i)));
  };
  for (const BlstmLayer* layer : {&weights.freq_layer, &weights.time_layer}) {
    for (const LstmDirection* dir : {&layer->forward, &layer->backward}) {
      push_matrix(dir->input_weights);
      push_matrix(dir->recurrent_weights);
      push_vector(dir->bias);
    }
  }
  push_matrix(weights.output_weights);
  push_vector(weights.output_bias);
  write_container(c, path);
}

FtJnfWeights import_ft_jnf_weights(const std::string& path) {
  const Container c = read_container(path, "FTJW1");
  std::size_t channels = 0, h1 = 0, h2 = 0;
  try {
    channels = c.header.at("C").get<std::size_t>();
    h1 = c.header.at("H1").get<std::size_t>();
    h2 = c.header.at("H2").get<std::size_t>();
    if (c.header.value("gate_order", "ifgo") != std::string("ifgo")) {
      throw FormatError("unsupported gate order");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("weight header: ") + e.what());
  }
  FtJnfWeights w = zero_ft_jnf_weights(channels, h1, h2);
  std::size_t idx = 0;
  auto take_matrix = [&](Eigen::MatrixXd& m) {
    if (idx + std::size_t(m.size()) > c.payload.size()) {
      throw FormatError("weight payload truncated");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = c.payload[idx++];
    }
  };
  auto take_vector = [&](Eigen::VectorXd& v) {
    if (idx + std::size_t(v.size()) > c.payload.size()) {
      throw FormatError("weight payload truncated");
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = c.payload[idx++];
  };
  for (BlstmLayer* layer : {&w.freq_layer, &w.time_layer}) {
    for (LstmDirection* dir : {&layer->forward, &layer->backward}) {
      take_matrix(dir->input_weights);
      take_matrix(dir->recurrent_weights);
      take_vector(dir->bias);
    }
  }
  take_matrix(w.output_weights);
  take_vector(w.output_bias);
  if (idx != c.payload.size()) {
    throw FormatError("weight payload has trailing data");
  }
  return w;
}

ToyCalibrateResult toy_calibrate(const TimeFreqTensor& noisy_tf,
                                 const std::vector<double>& clean_reference,
                                 std::size_t ref_channel, int iterations,
                                 double step) {
  if (ref_channel >= noisy_tf.num_channels) {
    throw ShapeError("reference channel out of range");
  }
  if (clean_reference.empty()) throw ShapeError("empty clean reference");
  const std::size_t bins = noisy_tf.num_bins();

  auto loss_of = [&](const std::vector<cplx>& gains) {
    ComplexMask mask;
    mask.num_frames = noisy_tf.num_frames;
    mask.num_bins = bins;
    mask.values.resize(mask.num_frames * bins);
    for (std::size_t t = 0; t < mask.num_frames; ++t) {
      for (std::size_t f = 0; f < bins; ++f) mask.at(t, f) = gains[f];
    }
    const TimeFreqTensor masked = apply_mask(mask, noisy_tf, ref_channel);
    MultichannelSignal audio = stft_inverse(masked);
    std::vector<double>& est = audio.channels[0];
    est.resize(clean_reference.size(), 0.0);
    return -si_sdr(clean_reference, est).value_db;
  };

  ToyCalibrateResult result;
  result.gains.assign(bins, cplx(1.0, 0.0));
  double current = loss_of(result.gains);
  if (!std::isfinite(current) && !std::isinf(current)) {
    throw Error("toy_calibrate: non-finite initial loss");
  }
  result.initial_loss = current;

  const double fd_step = 1e-4;
  std::vector<double> grad(2 * bins);
  for (int it = 0; it < iterations; ++it) {
    std::vector<cplx> probe = result.gains;
    for (std::size_t f = 0; f < bins; ++f) {
      for (int part = 0; part < 2; ++part) {
        const cplx delta = part == 0 ? cplx(fd_step, 0.0) : cplx(0.0, fd_step);
        probe[f] = result.gains[f] + delta;
        const double up = loss_of(probe);
        probe[f] = result.gains[f] - delta;
        const double down = loss_of(probe);
        probe[f] = result.gains[f];
        grad[2 * f + part] = (up - down) / (2.0 * fd_step);
      }
    }
    // Backtracking keeps the trajectory monotone.
    double trial_step = step;
    bool accepted = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::vector<cplx> trial = result.gains;
      for (std::size_t f = 0; f < bins; ++f) {
        trial[f] -= trial_step * cplx(grad[2 * f], grad[2 * f + 1]);
      }
      const double trial_loss = loss_of(trial);
      if (std::isnan(trial_loss)) {
        throw Error("toy_calibrate diverged: non-finite loss (step too large)");
      }
      if (trial_loss <= current) {
        result.gains = std::move(trial);
        current = trial_loss;
        accepted = true;
        break;
      }
      trial_step *= 0.5;
    }
    (void)accepted;
    result.loss_per_iter.push_back(current);
  }
  result.final_loss = current;
  return result;
}

}  // namespace ambidrop
