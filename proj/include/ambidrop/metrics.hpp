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

// Objective evaluation: SI-SDR, NMSE-in-dB helpers, and dataset-level
// aggregation of per-utterance scores.

#ifndef AMBIDROP_METRICS_HPP_
#define AMBIDROP_METRICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ambidrop/common.hpp"

namespace ambidrop {

struct SiSdrResult {
  double value_db = 0.0;  // +infinity when residual energy is negligible
  double scale = 0.0;     // optimal alpha = <est, ref> / <ref, ref>

  bool is_infinite() const;
};

// Scale-invariant signal-to-distortion ratio of `estimate` against
// `reference`.  Throws ShapeError on length mismatch and DomainError when
// the reference is all-zero.
SiSdrResult si_sdr(const std::vector<double>& reference,
                   const std::vector<double>& estimate);

// 10*log10(ratio); 0 maps to -infinity, negative input throws DomainError.
double nmse_db(double ratio);

struct EvalRow {
  std::string dataset;  // e.g. array name or split label
  std::string utterance;
  double noisy_si_sdr_db = 0.0;
  double enhanced_si_sdr_db = 0.0;
  // Reserved external scores (PESQ/STOI are third-party algorithms).
  std::optional<double> pesq_noisy, pesq_enhanced;
  std::optional<double> stoi_noisy, stoi_enhanced;
};

struct EvalAggregate {
  double mean_noisy_db = 0.0;
  double mean_enhanced_db = 0.0;
  std::size_t rows = 0;
  std::size_t excluded_infinite = 0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::map<std::string, EvalAggregate> per_dataset;
  EvalAggregate overall;
};

// Arithmetic means per dataset and overall; infinite values are excluded
// from the means with the exclusion count reported.
EvalReport aggregate(const std::vector<EvalRow>& rows);

std::string report_to_json(const EvalReport& report);
// Aligned text table (dataset rows, noisy/enhanced columns).
std::string report_to_table(const EvalReport& report);

}  // namespace ambidrop

#endif  // AMBIDROP_METRICS_HPP_
