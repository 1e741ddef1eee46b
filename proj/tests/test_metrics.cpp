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
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "ambidrop/metrics.hpp"

using namespace ambidrop;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = gauss(rng);
  return out;
}

}  // namespace

TEST_CASE("perfect estimate yields infinite SI-SDR and unit scale") {
  const auto s = random_signal(1000, 1);
  const SiSdrResult r = si_sdr(s, s);
  CHECK(r.is_infinite());
  CHECK(r.value_db == std::numeric_limits<double>::infinity());
  CHECK(r.scale == doctest::Approx(1.0));
}

TEST_CASE("SI-SDR is exactly scale invariant") {
  const auto s = random_signal(2000, 2);
  auto noisy = s;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 0.1);
  for (auto& v : noisy) v += gauss(rng);
  const double base = si_sdr(s, noisy).value_db;
  for (double g : {0.01, 0.5, 3.0, 1000.0, -2.0}) {
    auto scaled = noisy;
    for (auto& v : scaled) v *= g;
    CHECK(si_sdr(s, scaled).value_db == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("orthogonal equal-energy noise gives exactly 0 dB") {
  // reference on even samples, noise on odd: exactly orthogonal.
  const std::size_t n = 1024;
  // est = ref + e where e has the same energy as ref and <e, ref> = 0.
  std::vector<double> ref(n, 0.0), est(n, 1.0);
  for (std::size_t i = 0; i < n; i += 2) ref[i] = 1.0;
  const SiSdrResult r = si_sdr(ref, est);
  CHECK(std::abs(r.value_db - 0.0) < 1e-9);
  CHECK(r.scale == doctest::Approx(1.0));
}

TEST_CASE("known analytic value") {
  // est = a*ref + b*unit_orthogonal: SI-SDR = 10 log10(a^2 E / b^2).
  const std::size_t n = 512;
  std::vector<double> ref(n, 0.0), est(n, 0.0);
  ref[0] = 3.0;
  ref[1] = 4.0;  // energy 25
  est[0] = 2.0 * 3.0;
  est[1] = 2.0 * 4.0;
  est[2] = 1.5;  // orthogonal residual, energy 2.25
  const SiSdrResult r = si_sdr(ref, est);
  CHECK(r.scale == doctest::Approx(2.0));
  CHECK(r.value_db ==
        doctest::Approx(10.0 * std::log10(4.0 * 25.0 / 2.25)).epsilon(1e-12));
}

TEST_CASE("error handling") {
  CHECK_THROWS_AS(si_sdr({1.0, 2.0}, {1.0}), ShapeError);
  CHECK_THROWS_AS(si_sdr({0.0, 0.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(nmse_db(-0.5), DomainError);
  CHECK(nmse_db(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(nmse_db(0.01) == doctest::Approx(-20.0));
}

TEST_CASE("aggregation excludes infinities and groups by dataset") {
  std::vector<EvalRow> rows;
  EvalRow a;
  a.dataset = "train";
  a.utterance = "u1";
  a.noisy_si_sdr_db = 0.0;
  a.enhanced_si_sdr_db = 10.0;
  EvalRow b;
  b.dataset = "train";
  b.utterance = "u2";
  b.noisy_si_sdr_db = 2.0;
  b.enhanced_si_sdr_db = 14.0;
  EvalRow c;
  c.dataset = "test";
  c.utterance = "u3";
  c.noisy_si_sdr_db = -4.0;
  c.enhanced_si_sdr_db = std::numeric_limits<double>::infinity();
  rows = {a, b, c};

  const EvalReport report = aggregate(rows);
  CHECK(report.overall.rows == 3);
  CHECK(report.overall.excluded_infinite == 1);
  CHECK(report.per_dataset.at("train").mean_noisy_db == doctest::Approx(1.0));
  CHECK(report.per_dataset.at("train").mean_enhanced_db == doctest::Approx(12.0));
  CHECK(report.per_dataset.at("test").excluded_infinite == 1);
  CHECK(report.overall.mean_enhanced_db == doctest::Approx(12.0));

  const auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j.at("rows").size() == 3);
  CHECK(j.at("overall").at("excluded_infinite").get<int>() == 1);
  const std::string table = report_to_table(report);
  CHECK(table.find("train") != std::string::npos);
  CHECK(table.find("test") != std::string::npos);
}
