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

#include "ambidrop/steering.hpp"

#include <cmath>

#include "ambidrop/container.hpp"

namespace ambidrop {

FrequencyGrid FrequencyGrid::stft_bins(std::size_t fft_size, double sample_rate,
                                       double speed_of_sound) {
  FrequencyGrid grid;
  grid.speed_of_sound = speed_of_sound;
  const std::size_t bins = fft_size / 2 + 1;
  grid.frequencies.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    grid.frequencies.push_back(sample_rate * double(i) / double(fft_size));
  }
  return grid;
}

SteeringMatrix free_field_steering(const ArrayGeometry& array,
                                   const DirectionGrid& grid,
                                   const FrequencyGrid& freqs) {
  array.validate();
  if (grid.size() == 0) throw ShapeError("empty direction grid");
  if (freqs.speed_of_sound <= 0.0) throw DomainError("speed of sound <= 0");

  // Path advance r_m . u_q per (mic, direction); phase scales linearly in k.
  const std::size_t num_mics = array.mics.size();
  const std::size_t num_dirs = grid.size();
  Eigen::MatrixXd advance(num_mics, num_dirs);
  for (std::size_t q = 0; q < num_dirs; ++q) {
    const CartesianPoint u = unit_vector(grid.directions[q]);
    for (std::size_t m = 0; m < num_mics; ++m) {
      advance(m, q) =
          array.mics[m].x * u.x + array.mics[m].y * u.y + array.mics[m].z * u.z;
    }
  }

  SteeringMatrix steering;
  steering.directions = grid;
  steering.frequencies = freqs;
  steering.array_name = array.name;
  steering.per_frequency.reserve(freqs.frequencies.size());
  for (std::size_t i = 0; i < freqs.frequencies.size(); ++i) {
    const double k = freqs.wavenumber(i);
    Eigen::MatrixXcd v(num_mics, num_dirs);
    for (std::size_t q = 0; q < num_dirs; ++q) {
      for (std::size_t m = 0; m < num_mics; ++m) {
        const double ph = k * advance(m, q);
        v(m, q) = cplx(std::cos(ph), std::sin(ph));
      }
    }
    steering.per_frequency.push_back(std::move(v));
  }
  return steering;
}

void export_steering(const SteeringMatrix& steering, const std::string& path) {
  const std::size_t num_mics = steering.num_mics();
  const std::size_t num_dirs = steering.num_directions();
  const std::size_t num_freqs = steering.num_frequencies();
  Container c;
  c.magic = "ASMV1";
  c.header["M"] = num_mics;
  c.header["Q"] = num_dirs;
  c.header["F"] = num_freqs;
  c.header["frequencies"] = steering.frequencies.frequencies;
  c.header["speed_of_sound"] = steering.frequencies.speed_of_sound;
  c.header["array_name"] = steering.array_name;
  auto dirs = nlohmann::json::array();
  for (const auto& d : steering.directions.directions) {
    dirs.push_back({d.theta, d.phi});
  }
  c.header["directions"] = dirs;
  c.payload.reserve(2 * num_freqs * num_mics * num_dirs);
  for (std::size_t f = 0; f < num_freqs; ++f) {
    const auto& v = steering.per_frequency[f];
    for (std::size_t m = 0; m < num_mics; ++m) {
      for (std::size_t q = 0; q < num_dirs; ++q) {
        c.payload.push_back(float(v(m, q).real()));
        c.payload.push_back(float(v(m, q).imag()));
      }
    }
  }
  write_container(c, path);
}

SteeringMatrix import_measured_steering(const std::string& path) {
  const Container c = read_container(path, "ASMV1");
  SteeringMatrix steering;
  std::size_t num_mics = 0, num_dirs = 0, num_freqs = 0;
  try {
    num_mics = c.header.at("M").get<std::size_t>();
    num_dirs = c.header.at("Q").get<std::size_t>();
    num_freqs = c.header.at("F").get<std::size_t>();
    steering.frequencies.frequencies =
        c.header.at("frequencies").get<std::vector<double>>();
    steering.frequencies.speed_of_sound =
        c.header.value("speed_of_sound", kDefaultSpeedOfSound);
    steering.array_name = c.header.value("array_name", std::string());
    for (const auto& d : c.header.at("directions")) {
      if (d.size() != 2) throw FormatError("direction entry must be [theta, phi]");
      steering.directions.directions.emplace_back(d[0].get<double>(),
                                                  d[1].get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("steering header: ") + e.what());
  }
  if (steering.frequencies.frequencies.size() != num_freqs) {
    throw FormatError("frequency list length disagrees with F");
  }
  if (steering.directions.size() != num_dirs) {
    throw FormatError("direction list length disagrees with Q");
  }
  if (c.payload.size() != 2 * num_freqs * num_mics * num_dirs) {
    throw FormatError("steering payload size disagrees with F*M*Q");
  }
  std::size_t idx = 0;
  steering.per_frequency.reserve(num_freqs);
  for (std::size_t f = 0; f < num_freqs; ++f) {
    Eigen::MatrixXcd v(num_mics, num_dirs);
    for (std::size_t m = 0; m < num_mics; ++m) {
      for (std::size_t q = 0; q < num_dirs; ++q) {
        const double re = c.payload[idx++];
        const double im = c.payload[idx++];
        v(m, q) = cplx(re, im);
      }
    }
    steering.per_frequency.push_back(std::move(v));
  }
  return steering;
}

}  // namespace ambidrop
