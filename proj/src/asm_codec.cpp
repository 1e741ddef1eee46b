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

#include "ambidrop/asm_codec.hpp"

#include <cmath>

#include "ambidrop/container.hpp"
#include "ambidrop/sh.hpp"
#include "ambidrop/simd.hpp"

namespace ambidrop {

double AsmDesignParams::regularization() const {
  if (!std::isfinite(snr_db)) throw DomainError("design SNR must be finite");
  return std::pow(10.0, -snr_db / 10.0);
}

AsmFilterBank asm_design(const SteeringMatrix& steering,
                         const AsmDesignParams& params) {
  if (steering.num_directions() == 0 || steering.num_frequencies() == 0) {
    throw ShapeError("empty steering matrix");
  }
  if (params.harmonic_set.size() == 0) throw ShapeError("empty harmonic set");
  const double lambda = params.regularization();

  const Eigen::MatrixXcd y = sh_matrix(params.harmonic_set, steering.directions);

  AsmFilterBank bank;
  bank.harmonic_set = params.harmonic_set;
  bank.frequencies = steering.frequencies;
  bank.array_name = steering.array_name;
  bank.snr_db = params.snr_db;
  bank.per_frequency.reserve(steering.num_frequencies());

  const std::size_t num_mics = steering.num_mics();
  for (std::size_t f = 0; f < steering.num_frequencies(); ++f) {
    const Eigen::MatrixXcd& v = steering.per_frequency[f];
    Eigen::MatrixXcd gram = v * v.adjoint();
    gram.diagonal().array() += lambda;
    const Eigen::MatrixXcd rhs = v * y;  // M x channels
    const Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
      throw SolverError("ASM solve failed at frequency " +
                        std::to_string(steering.frequencies.frequencies[f]) +
                        " Hz");
    }
    const Eigen::MatrixXcd c = ldlt.solve(rhs);  // M x channels
    const double residual = (gram * c - rhs).norm();
    if (!(residual <= 1e-8 * rhs.norm() + 1e-300) || !c.allFinite()) {
      throw SolverError("ASM normal equations ill-conditioned at frequency " +
                        std::to_string(steering.frequencies.frequencies[f]) +
                        " Hz");
    }
    // Row per harmonic channel.
    Eigen::MatrixXcd rows(params.harmonic_set.size(), num_mics);
    rows = c.transpose();
    bank.per_frequency.push_back(std::move(rows));
  }
  return bank;
}

TimeFreqTensor asm_apply(const AsmFilterBank& filters,
                         const TimeFreqTensor& mic_tf) {
  const std::size_t num_mics = filters.num_mics();
  const std::size_t bins = mic_tf.num_bins();
  if (mic_tf.num_channels != num_mics) {
    throw ShapeError("microphone channel count does not match filter bank");
  }
  if (filters.num_frequencies() != bins) {
    throw ShapeError("filter bank frequency grid does not match STFT bins");
  }

  TimeFreqTensor out;
  out.config = mic_tf.config;
  out.num_channels = filters.num_channels();
  out.num_frames = mic_tf.num_frames;
  out.values.assign(out.num_channels * out.num_frames * bins, cplx(0.0));

  // Per-bin weight rows, gathered once so the inner loop is a contiguous
  // conjugated multiply-accumulate across bins.
  std::vector<cplx> weights(bins);
  for (std::size_t c = 0; c < out.num_channels; ++c) {
    for (std::size_t m = 0; m < num_mics; ++m) {
      for (std::size_t f = 0; f < bins; ++f) {
        weights[f] = filters.per_frequency[f](Eigen::Index(c), Eigen::Index(m));
      }
      for (std::size_t t = 0; t < mic_tf.num_frames; ++t) {
        simd::active().cmac_conj(weights.data(), mic_tf.frame(m, t),
                                 out.frame(c, t), bins);
      }
    }
  }
  return out;
}

std::vector<double> asm_nmse(const SteeringMatrix& steering,
                             const AsmFilterBank& filters,
                             const HarmonicIndex& harmonic, double lambda) {
  if (steering.num_frequencies() != filters.num_frequencies()) {
    throw ShapeError("steering and filter bank frequency counts differ");
  }
  std::size_t channel = filters.harmonic_set.size();
  for (std::size_t c = 0; c < filters.harmonic_set.size(); ++c) {
    if (filters.harmonic_set.indices[c] == harmonic) {
      channel = c;
      break;
    }
  }
  if (channel == filters.harmonic_set.size()) {
    throw ShapeError("harmonic not present in filter bank");
  }

  Eigen::VectorXcd y(steering.num_directions());
  for (std::size_t q = 0; q < steering.num_directions(); ++q) {
    y(Eigen::Index(q)) = sh_eval(harmonic, steering.directions.directions[q]);
  }
  const double y_norm2 = y.squaredNorm();

  std::vector<double> nmse(steering.num_frequencies());
  for (std::size_t f = 0; f < steering.num_frequencies(); ++f) {
    const Eigen::VectorXcd c =
        filters.per_frequency[f].row(Eigen::Index(channel)).transpose();
    const double signal_err =
        (steering.per_frequency[f].adjoint() * c - y).squaredNorm();
    nmse[f] = (signal_err + lambda * c.squaredNorm()) / y_norm2;
  }
  return nmse;
}

Encodability check_encodability(const HarmonicSet& set, std::size_t num_mics) {
  return set.size() <= num_mics ? Encodability::kPass : Encodability::kWarn;
}

void export_filter_bank(const AsmFilterBank& bank, const std::string& path) {
  Container c;
  c.magic = "ASMF1";
  c.header["M"] = bank.num_mics();
  c.header["C"] = bank.num_channels();
  c.header["F"] = bank.num_frequencies();
  c.header["frequencies"] = bank.frequencies.frequencies;
  c.header["speed_of_sound"] = bank.frequencies.speed_of_sound;
  c.header["array_name"] = bank.array_name;
  c.header["snr_db"] = bank.snr_db;
  c.header["max_order"] = bank.harmonic_set.max_order;
  auto harmonics = nlohmann::json::array();
  for (const auto& h : bank.harmonic_set.indices) {
    harmonics.push_back({h.n, h.m});
  }
  c.header["harmonics"] = harmonics;
  for (const auto& mat : bank.per_frequency) {
    for (Eigen::Index row = 0; row < mat.rows(); ++row) {
      for (Eigen::Index col = 0; col < mat.cols(); ++col) {
        c.payload.push_back(float(mat(row, col).real()));
        c.payload.push_back(float(mat(row, col).imag()));
      }
    }
  }
  write_container(c, path);
}

AsmFilterBank import_filter_bank(const std::string& path) {
  const Container c = read_container(path, "ASMF1");
  AsmFilterBank bank;
  std::size_t num_mics = 0, num_channels = 0, num_freqs = 0;
  try {
    num_mics = c.header.at("M").get<std::size_t>();
    num_channels = c.header.at("C").get<std::size_t>();
    num_freqs = c.header.at("F").get<std::size_t>();
    bank.frequencies.frequencies =
        c.header.at("frequencies").get<std::vector<double>>();
    bank.frequencies.speed_of_sound =
        c.header.value("speed_of_sound", kDefaultSpeedOfSound);
    bank.array_name = c.header.value("array_name", std::string());
    bank.snr_db = c.header.value("snr_db", 30.0);
    bank.harmonic_set.max_order = c.header.value("max_order", 0);
    for (const auto& h : c.header.at("harmonics")) {
      if (h.size() != 2) throw FormatError("harmonic entry must be [n, m]");
      bank.harmonic_set.indices.push_back({h[0].get<int>(), h[1].get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("filter bank header: ") + e.what());
  }
  if (bank.harmonic_set.size() != num_channels) {
    throw FormatError("harmonic list length disagrees with C");
  }
  if (bank.frequencies.frequencies.size() != num_freqs) {
    throw FormatError("frequency list length disagrees with F");
  }
  if (c.payload.size() != 2 * num_freqs * num_channels * num_mics) {
    throw FormatError("filter bank payload size disagrees with F*C*M");
  }
  std::size_t idx = 0;
  for (std::size_t f = 0; f < num_freqs; ++f) {
    Eigen::MatrixXcd mat(num_channels, num_mics);
    for (std::size_t row = 0; row < num_channels; ++row) {
      for (std::size_t col = 0; col < num_mics; ++col) {
        const double re = c.payload[idx++];
        const double im = c.payload[idx++];
        mat(Eigen::Index(row), Eigen::Index(col)) = cplx(re, im);
      }
    }
    bank.per_frequency.push_back(std::move(mat));
  }
  return bank;
}

}  // namespace ambidrop
