// Copyright 2026 The PhononHerald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "phononherald/analysis/statistics.hpp"
#include "phononherald/analysis/trial_table.hpp"

namespace phononherald::analysis {

struct DelayResult {
  double delta_t_ns = 0;
  EventCounts counts;
  std::optional<CorrelationEstimate> cross;
  std::optional<CorrelationEstimate> auto_write;
  std::optional<CorrelationEstimate> auto_read;
  std::optional<CorrelationEstimate> bound;
  std::optional<Verdict> verdict;
  /// Why an estimate is missing, if one is.
  std::vector<std::string> notes;
};

struct OffsetResult {
  double delta_t_ns = 0;
  std::int64_t delta_n = 0;
  std::optional<CorrelationEstimate> cross;
};

struct AnalysisReport {
  std::uint64_t config_hash = 0;
  std::uint64_t trial_count = 0;
  std::optional<double> read_trim_ns;
  std::vector<DelayResult> delays;
  std::vector<OffsetResult> offsets;

  /// True when every delay has a cross-correlation and bound.
  bool complete() const;
};

struct AnalysisOptions {
  /// Trial offsets to evaluate in addition to delta n = 0.
  std::vector<std::int64_t> delta_n;
};

AnalysisReport analyze(const TrialTable& table, const AnalysisOptions& options = {});

/// Columns: delta_t_ns, g2_om, ci_minus, ci_plus, bound, bound_ci_minus,
/// bound_ci_plus, violated. Missing values are written as nan.
std::string correlation_csv(const AnalysisReport& report);
/// Columns: delta_t_ns, delta_n, g2_om, ci_minus, ci_plus.
std::string offset_csv(const AnalysisReport& report);
nlohmann::json to_json(const CorrelationEstimate& e);
nlohmann::json to_json(const AnalysisReport& report);

}  // namespace phononherald::analysis
