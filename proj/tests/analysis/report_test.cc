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

#include <cmath>

#include <gtest/gtest.h>

#include "phononherald/analysis/report.hpp"
#include "phononherald/sim/rng.hpp"
#include "support/simulation.hpp"

namespace phononherald::analysis {
namespace {

using testing::bright_config;
using testing::spec_for;

struct Simulated {
  sim::ExperimentConfig config;
  std::vector<sim::OutcomeTable> tables;
  TagStream stream;
  TrialTable table;
};

Simulated simulate(sim::ExperimentConfig c) {
  auto tables = sim::build_outcome_tables(c);
  auto stream = sim::sample_trials(c, tables, 4).stream;
  auto table = tabulate(stream, spec_for(c));
  return {c, std::move(tables), std::move(stream), std::move(table)};
}

const Simulated& bright_run() {
  static const Simulated run = [] {
    auto c = bright_config();
    c.protocol.delta_t_ns = {100, 1000};
    c.protocol.trials = 600000;
    return simulate(c);
  }();
  return run;
}

/// |estimate - expected| in units of the interval half-width on that side.
double pull(const CorrelationEstimate& e, double expected) {
  const double side = expected > e.value ? e.sigma_plus : e.sigma_minus;
  return std::abs(expected - e.value) / side;
}

TEST(Estimators, ConvergeToTableValues) {
  const auto& run = bright_run();
  for (std::size_t g = 0; g < 2; ++g) {
    const auto& t = run.tables[g];
    EXPECT_LT(pull(g2_cross_estimate(run.table, g, 0), t.g2_cross()), 4) << g;
    EXPECT_LT(pull(g2_auto_estimate(run.table, Window::Read, g), t.g2_read_auto()), 4) << g;
  }
  EXPECT_LT(pull(g2_auto_estimate(run.table, Window::Write, 0), run.tables[0].g2_write_auto()), 4);
}

TEST(Estimators, OffsetTrialsAreIndependent) {
  const auto& run = bright_run();
  for (std::int64_t dn = 1; dn <= 10; ++dn)
    for (std::int64_t sign : {-1, 1}) {
      const auto e = g2_cross_estimate(run.table, 0, sign * dn);
      EXPECT_LT(pull(e, 1.0), 4) << sign * dn;
      EXPECT_EQ(e.trials, run.table.groups()[0].count - dn);
    }
}

TEST(Estimators, OffsetPairsWriteWithLaterRead) {
  std::vector<TrialTable::Entry> entries = {{0, kWrite1}, {1, kRead2}, {4, kWrite2 | kRead1}, {5, kRead1}};
  const TrialTable table(8, {{100, 0, 8, 0, 1}}, entries);
  const auto same = g2_cross_estimate(table, 0, 0);
  EXPECT_EQ(same.coincidences, 1u);
  EXPECT_EQ(same.trials, 8u);
  const auto next = g2_cross_estimate(table, 0, 1);
  EXPECT_EQ(next.coincidences, 2u);
  EXPECT_EQ(next.trials, 7u);
  EXPECT_EQ(next.singles_x, 2u);  // writes of trials 0..6
  EXPECT_EQ(next.singles_y, 3u);  // reads of trials 1..7
  const auto previous = g2_cross_estimate(table, 0, -1);
  EXPECT_EQ(previous.coincidences, 0u);
  EXPECT_THROW(g2_cross_estimate(table, 0, 8), EstimationError);
}

TEST(Estimators, WriteAutocorrelationPoolsDelays) {
  const auto& run = bright_run();
  const auto pooled = g2_auto_estimate(run.table, Window::Write, 1);
  EXPECT_EQ(pooled.trials, run.table.trial_count());
  EXPECT_EQ(g2_auto_estimate(run.table, Window::Read, 1).trials, run.table.groups()[1].count);
}

TEST(Estimators, ThinningLeavesAutocorrelationUnchanged) {
  const auto& run = bright_run();
  const auto full = g2_auto_estimate(run.table, Window::Write, 0);
  double sum = 0, sigma = 0;
  const int resamples = 20;
  for (int k = 0; k < resamples; ++k) {
    TagStream thinned = run.stream;
    thinned.records.clear();
    std::uint64_t i = 0;
    for (const auto& r : run.stream.records)
      if (sim::CounterRng(977 + k, i++).uniform() < 0.5) thinned.records.push_back(r);
    const auto e = g2_auto_estimate(tabulate(thinned, spec_for(run.config)), Window::Write, 0);
    sum += e.value;
    sigma += 0.5 * (e.sigma_minus + e.sigma_plus);
  }
  const double mean = sum / resamples;
  const double combined = std::hypot(0.5 * (full.sigma_minus + full.sigma_plus), sigma / resamples);
  EXPECT_LT(std::abs(mean - full.value), combined);
}

TEST(Report, BrightRunViolatesTheBound) {
  const auto& run = bright_run();
  const auto report = analyze(run.table, {{1, 2, 3}});
  ASSERT_TRUE(report.complete());
  ASSERT_EQ(report.delays.size(), 2u);
  for (const auto& d : report.delays) {
    ASSERT_TRUE(d.verdict);
    EXPECT_TRUE(d.verdict->violated) << d.delta_t_ns;
    EXPECT_GT(d.cross->value, d.bound->value);
    EXPECT_TRUE(d.notes.empty());
  }
  EXPECT_EQ(report.offsets.size(), 6u);
  EXPECT_EQ(report.delays[0].counts, run.table.counts(0));
}

TEST(Report, CsvAndJsonLayout) {
  const auto& run = bright_run();
  auto report = analyze(run.table, {{1}});
  report.config_hash = 0xabcULL;
  const auto csv = correlation_csv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "delta_t_ns,g2_om,ci_minus,ci_plus,bound,bound_ci_minus,bound_ci_plus,violated");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\n100,"), std::string::npos);
  EXPECT_NE(csv.find("\n1000,"), std::string::npos);
  const auto offsets = offset_csv(report);
  EXPECT_EQ(offsets.substr(0, offsets.find('\n')), "delta_t_ns,delta_n,g2_om,ci_minus,ci_plus");
  const auto j = to_json(report);
  EXPECT_EQ(j.at("config_hash"), "0000000000000abc");
  const auto& d = j.at("delays").at(0);
  EXPECT_EQ(d.at("g2_om").at("coincidences"), report.delays[0].cross->coincidences);
  EXPECT_TRUE(d.contains("classical_bound"));
  EXPECT_TRUE(d.contains("cauchy_schwarz"));
  EXPECT_TRUE(d.contains("counts"));
}

TEST(Report, EmptyStreamIsFlagged) {
  auto c = bright_config();
  c.protocol.trials = 0;
  const auto run = simulate(c);
  const auto report = analyze(run.table);
  EXPECT_FALSE(report.complete());
  EXPECT_FALSE(report.delays[0].cross);
  EXPECT_FALSE(report.delays[0].notes.empty());
  const auto csv = correlation_csv(report);
  EXPECT_NE(csv.find("\n100,nan,nan,nan,nan,nan,nan,nan\n"), std::string::npos);
}

}  // namespace
}  // namespace phononherald::analysis
