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


#include "phononherald/analysis/report.hpp"

#include <cmath>

#include <fmt/format.h>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

template <typename F>
auto attempt(F f, std::vector<std::string>& notes, const char* what)
    -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const std::domain_error& e) {
    notes.push_back(std::string(what) + ": " + e.what());
    return std::nullopt;
  }
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.10g}", v);
}

std::string num(const std::optional<CorrelationEstimate>& e, double CorrelationEstimate::*field) {
  return e ? num((*e).*field) : "nan";
}

}  // namespace

bool AnalysisReport::complete() const {
  for (const auto& d : delays)
    if (!d.cross || !d.bound) return false;
  return true;
}

AnalysisReport analyze(const TrialTable& table, const AnalysisOptions& options) {
  AnalysisReport report;
  report.trial_count = table.trial_count();
  std::vector<std::string> pooled_notes;
  const auto auto_write =
      attempt([&] { return g2_auto_estimate(table, Window::Write, 0); }, pooled_notes, "write autocorrelation");
  for (std::size_t g = 0; g < table.groups().size(); ++g) {
    DelayResult d;
    d.delta_t_ns = table.groups()[g].delta_t_ns;
    d.counts = table.counts(g);
    d.notes = pooled_notes;
    d.auto_write = auto_write;
    d.cross = attempt([&] { return g2_cross_estimate(table, g, 0); }, d.notes, "cross-correlation");
    d.auto_read = attempt([&] { return g2_auto_estimate(table, Window::Read, g); }, d.notes,
                          "read autocorrelation");
    if (d.auto_write && d.auto_read) {
      d.bound = attempt([&] { return classical_bound(*d.auto_write, *d.auto_read); }, d.notes,
                        "classical bound");
    }
    if (d.cross && d.bound) d.verdict = cauchy_schwarz_test(*d.cross, *d.bound);
    report.delays.push_back(std::move(d));

    for (auto dn : options.delta_n) {
      OffsetResult o;
      o.delta_t_ns = table.groups()[g].delta_t_ns;
      o.delta_n = dn;
      std::vector<std::string> ignored;
      o.cross = attempt([&] { return g2_cross_estimate(table, g, dn); }, ignored, "offset");
      report.offsets.push_back(o);
    }
  }
  return report;
}

std::string correlation_csv(const AnalysisReport& report) {
  std::string out =
      "delta_t_ns,g2_om,ci_minus,ci_plus,bound,bound_ci_minus,bound_ci_plus,violated\n";
  for (const auto& d : report.delays) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", num(d.delta_t_ns),
                       num(d.cross, &CorrelationEstimate::value),
                       num(d.cross, &CorrelationEstimate::sigma_minus),
                       num(d.cross, &CorrelationEstimate::sigma_plus),
                       num(d.bound, &CorrelationEstimate::value),
                       num(d.bound, &CorrelationEstimate::sigma_minus),
                       num(d.bound, &CorrelationEstimate::sigma_plus),
                       d.verdict ? (d.verdict->violated ? "true" : "false") : "nan");
  }
  return out;
}

std::string offset_csv(const AnalysisReport& report) {
  std::string out = "delta_t_ns,delta_n,g2_om,ci_minus,ci_plus\n";
  for (const auto& o : report.offsets) {
    out += fmt::format("{},{},{},{},{}\n", num(o.delta_t_ns), o.delta_n,
                       num(o.cross, &CorrelationEstimate::value),
                       num(o.cross, &CorrelationEstimate::sigma_minus),
                       num(o.cross, &CorrelationEstimate::sigma_plus));
  }
  return out;
}

nlohmann::json to_json(const CorrelationEstimate& e) {
  return {{"value", e.value},
          {"sigma_minus", e.sigma_minus},
          {"sigma_plus", e.sigma_plus},
          {"coincidences", e.coincidences},
          {"trials", e.trials},
          {"singles_x", e.singles_x},
          {"singles_y", e.singles_y}};
}

namespace {

nlohmann::json optional_json(const std::optional<CorrelationEstimate>& e) {
  return e ? to_json(*e) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const AnalysisReport& report) {
  nlohmann::json j;
  j["config_hash"] = fmt::format("{:016x}", report.config_hash);
  j["trial_count"] = report.trial_count;
  j["read_trim_ns"] = report.read_trim_ns ? nlohmann::json(*report.read_trim_ns) : nlohmann::json(nullptr);
  j["complete"] = report.complete();
  auto& delays = j["delays"] = nlohmann::json::array();
  for (const auto& d : report.delays) {
    const auto& c = d.counts;
    nlohmann::json row = {
        {"delta_t_ns", d.delta_t_ns},
        {"counts",
         {{"T", c.trials},
          {"W1", c.w1},
          {"W2", c.w2},
          {"R1", c.r1},
          {"R2", c.r2},
          {"W1_and_W2", c.w12},
          {"R1_and_R2", c.r12},
          {"W", c.w_any},
          {"R", c.r_any},
          {"W_and_R", c.wr}}},
        {"g2_om", optional_json(d.cross)},
        {"g2_oo", optional_json(d.auto_write)},
        {"g2_mm", optional_json(d.auto_read)},
        {"classical_bound", optional_json(d.bound)},
        {"notes", d.notes}};
    if (d.verdict) {
      row["cauchy_schwarz"] = {{"violated", d.verdict->violated},
                               {"margin", std::isfinite(d.verdict->margin) ? nlohmann::json(d.verdict->margin)
                                                                           : nlohmann::json(nullptr)},
                               {"separation", d.verdict->separation}};
    } else {
      row["cauchy_schwarz"] = nullptr;
    }
    delays.push_back(row);
  }
  auto& offsets = j["delta_n"] = nlohmann::json::array();
  for (const auto& o : report.offsets)
    offsets.push_back({{"delta_t_ns", o.delta_t_ns}, {"delta_n", o.delta_n}, {"g2_om", optional_json(o.cross)}});
  return j;
}

}  // namespace phononherald::analysis
