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

#include "ambidrop/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ambidrop/simd.hpp"

namespace ambidrop {

bool SiSdrResult::is_infinite() const { return std::isinf(value_db); }

SiSdrResult si_sdr(const std::vector<double>& reference,
                   const std::vector<double>& estimate) {
  if (reference.size() != estimate.size() || reference.empty()) {
    throw ShapeError("si_sdr requires equal non-empty lengths");
  }
  const auto& k = simd::active();
  const double ref_energy = k.sumsq(reference.data(), reference.size());
  if (ref_energy <= 0.0) throw DomainError("si_sdr reference is all-zero");

  SiSdrResult result;
  result.scale =
      k.dot(estimate.data(), reference.data(), reference.size()) / ref_energy;
  const double target_energy = result.scale * result.scale * ref_energy;
  double residual_energy = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = result.scale * reference[i] - estimate[i];
    residual_energy += e * e;
  }
  if (residual_energy < 1e-30 * ref_energy) {
    result.value_db = std::numeric_limits<double>::infinity();
  } else {
    result.value_db = 10.0 * std::log10(target_energy / residual_energy);
  }
  return result;
}

double nmse_db(double ratio) {
  if (ratio < 0.0 || std::isnan(ratio)) {
    throw DomainError("NMSE ratio must be >= 0");
  }
  if (ratio == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ratio);
}

EvalReport aggregate(const std::vector<EvalRow>& rows) {
  if (rows.empty()) throw ShapeError("no rows to aggregate");
  EvalReport report;
  report.rows = rows;
  auto add = [](EvalAggregate& agg, const EvalRow& row) {
    agg.rows += 1;
    if (std::isinf(row.noisy_si_sdr_db) || std::isinf(row.enhanced_si_sdr_db)) {
      agg.excluded_infinite += 1;
      return;
    }
    agg.mean_noisy_db += row.noisy_si_sdr_db;
    agg.mean_enhanced_db += row.enhanced_si_sdr_db;
  };
  for (const auto& row : rows) {
    add(report.per_dataset[row.dataset], row);
    add(report.overall, row);
  }
  auto finish = [](EvalAggregate& agg) {
    const std::size_t counted = agg.rows - agg.excluded_infinite;
    if (counted > 0) {
      agg.mean_noisy_db /= double(counted);
      agg.mean_enhanced_db /= double(counted);
    }
  };
  for (auto& [_, agg] : report.per_dataset) finish(agg);
  finish(report.overall);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["dataset"] = row.dataset;
    r["utterance"] = row.utterance;
    r["si_sdr_noisy_db"] = row.noisy_si_sdr_db;
    r["si_sdr_enhanced_db"] = row.enhanced_si_sdr_db;
    if (row.pesq_noisy) r["pesq_noisy"] = *row.pesq_noisy;
    if (row.pesq_enhanced) r["pesq_enhanced"] = *row.pesq_enhanced;
    if (row.stoi_noisy) r["stoi_noisy"] = *row.stoi_noisy;
    if (row.stoi_enhanced) r["stoi_enhanced"] = *row.stoi_enhanced;
    rows.push_back(r);
  }
  j["rows"] = rows;
  auto agg_json = [](const EvalAggregate& agg) {
    nlohmann::json a;
    a["mean_si_sdr_noisy_db"] = agg.mean_noisy_db;
    a["mean_si_sdr_enhanced_db"] = agg.mean_enhanced_db;
    a["rows"] = agg.rows;
    a["excluded_infinite"] = agg.excluded_infinite;
    return a;
  };
  for (const auto& [name, agg] : report.per_dataset) {
    j["per_dataset"][name] = agg_json(agg);
  }
  j["overall"] = agg_json(report.overall);
  return j.dump(2);
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(24) << "Dataset" << std::right << std::setw(12)
      << "SI-SDR n" << std::setw(12) << "SI-SDR e" << std::setw(8) << "rows"
      << std::setw(10) << "excl" << '\n';
  for (const auto& [name, agg] : report.per_dataset) {
    out << std::left << std::setw(24) << name << std::right << std::setw(12)
        << agg.mean_noisy_db << std::setw(12) << agg.mean_enhanced_db
        << std::setw(8) << agg.rows << std::setw(10) << agg.excluded_infinite
        << '\n';
  }
  out << std::left << std::setw(24) << "overall" << std::right << std::setw(12)
      << report.overall.mean_noisy_db << std::setw(12)
      << report.overall.mean_enhanced_db << std::setw(8) << report.overall.rows
      << std::setw(10) << report.overall.excluded_infinite << '\n';
  return out.str();
}

}  // namespace ambidrop
