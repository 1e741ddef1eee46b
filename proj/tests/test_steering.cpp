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
#include <fstream>

#include "ambidrop/container.hpp"
#include "ambidrop/geometry.hpp"
#include "ambidrop/steering.hpp"

using namespace ambidrop;

namespace {

std::string temp_path(const char* stem) {
  return std::string("steering_test_") + stem + ".bin";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("stft bin grid spans 0 to Nyquist") {
  const FrequencyGrid grid = FrequencyGrid::stft_bins(512, 16000.0);
  REQUIRE(grid.frequencies.size() == 257);
  CHECK(grid.frequencies.front() == doctest::Approx(0.0));
  CHECK(grid.frequencies.back() == doctest::Approx(8000.0));
  CHECK(grid.frequencies[1] == doctest::Approx(16000.0 / 512.0));
  CHECK(grid.wavenumber(256) == doctest::Approx(kTwoPi * 8000.0 / 343.0));
}

TEST_CASE("free-field steering matches the phase-advance closed form") {
  const ArrayGeometry array = builtin_array("full_circle_r10");
  const DirectionGrid grid = horizon_grid(8);
  FrequencyGrid freqs;
  freqs.frequencies = {1000.0, 4000.0};
  const SteeringMatrix steering = free_field_steering(array, grid, freqs);

  REQUIRE(steering.num_mics() == 5);
  REQUIRE(steering.num_directions() == 8);
  REQUIRE(steering.num_frequencies() == 2);

  for (std::size_t fi = 0; fi < 2; ++fi) {
    const double k = freqs.wavenumber(fi);
    for (std::size_t m = 0; m < 5; ++m) {
      for (std::size_t q = 0; q < 8; ++q) {
        const CartesianPoint u = unit_vector(grid.directions[q]);
        const double phase =
            k * (array.mics[m].x * u.x + array.mics[m].y * u.y +
                 array.mics[m].z * u.z);
        const cplx expect(std::cos(phase), std::sin(phase));
        CHECK(std::abs(steering.per_frequency[fi](long(m), long(q)) - expect) <
              1e-12);
      }
    }
  }

  // Unit modulus everywhere (omnidirectional free field).
  for (const auto& mat : steering.per_frequency) {
    CHECK((mat.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  // DC steering is all ones.
  FrequencyGrid dc;
  dc.frequencies = {0.0};
  const SteeringMatrix at_dc = free_field_steering(array, grid, dc);
  CHECK((at_dc.per_frequency[0].array() - 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("steering container round trip is bit-stable") {
  const ArrayGeometry array = builtin_array("random2");
  const SteeringMatrix steering = free_field_steering(
      array, horizon_grid(16), FrequencyGrid::stft_bins(64, 16000.0));

  const std::string path1 = temp_path("rt1");
  const std::string path2 = temp_path("rt2");
  export_steering(steering, path1);
  const SteeringMatrix back = import_measured_steering(path1);
  CHECK(back.array_name == steering.array_name);
  REQUIRE(back.num_frequencies() == steering.num_frequencies());
  REQUIRE(back.num_mics() == steering.num_mics());
  REQUIRE(back.num_directions() == steering.num_directions());

  // Export of the imported matrix reproduces the file byte for byte.
  export_steering(back, path2);
  CHECK(slurp(path1) == slurp(path2));
  std::remove(path1.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("malformed containers are rejected") {
  const std::string path = temp_path("bad");
  {
    std::ofstream out(path, std::ios::binary);
    out << "WRONG\x04\x00\x00\x00{}xx";
  }
  CHECK_THROWS_AS(import_measured_steering(path), FormatError);
  {
    std::ofstream out(path, std::ios::binary);
    out << "ASMV1\xff\xff\xff\x7f";
  }
  CHECK_THROWS_AS(import_measured_steering(path), FormatError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(import_measured_steering("no_such_file.bin"), FormatError);
}
