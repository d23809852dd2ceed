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

#include "phononherald/analysis/trial_table.hpp"
#include "phononherald/sim/protocol.hpp"
#include "phononherald/sim/rng.hpp"
#include "support/simulation.hpp"

namespace phononherald::sim {
namespace {

using testing::spec_for;

TEST(CounterRng, DependsOnlyOnSeedAndStream) {
  CounterRng a(7, 11), b(7, 11), c(7, 12), d(8, 11);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
}

TEST(CounterRng, UniformMoments) {
  CounterRng rng(1, 2);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0);
    ASSERT_LT(u, 1);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sq / n, 1.0 / 3, 0.005);
}

TEST(CounterRng, BelowStaysInRange) {
  CounterRng rng(3, 4);
  std::array<int, 5> hist{};
  for (int i = 0; i < 50000; ++i) {
    const auto k = rng.below(5);
    ASSERT_LT(k, 5u);
    ++hist[k];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 4 * std::sqrt(8000.0));
}

TEST(TrialGroups, SplitEvenlyWithRemainderFirst) {
  ExperimentConfig c;
  c.protocol.delta_t_ns = {100, 200, 300};
  c.protocol.trials = 10;
  const auto g = trial_groups(c);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].count, 4u);
  EXPECT_EQ(g[1].first_trial, 4u);
  EXPECT_EQ(g[2].first_trial, 7u);
  EXPECT_EQ(g[2].count, 3u);
}

TEST(Windows, ReadFollowsWriteByTheDelay) {
  ExperimentConfig c;
  const auto w = write_window(c);
  const auto r = read_window(c, 100);
  EXPECT_EQ(w.start_ps, 0u);
  EXPECT_EQ(w.length_ps, 50000u);
  EXPECT_EQ(r.start_ps, 150000u);
  EXPECT_EQ(r.length_ps, 55000u);
}

TEST(SampleTrials, ZeroTrialsGiveEmptyStream) {
  ExperimentConfig c;
  c.protocol.trials = 0;
  const auto r = sample_trials(c, build_outcome_tables(c));
  EXPECT_EQ(r.stream.trial_count, 0u);
  EXPECT_TRUE(r.stream.records.empty());
  EXPECT_EQ(r.stream.config_hash, config_hash(c));
}

TEST(SampleTrials, SilentTableGivesEmptyStream) {
  ExperimentConfig c;
  c.protocol.trials = 1000;
  OutcomeTable silent;
  silent.p[0] = 1;
  const auto r = sample_trials(c, {silent});
  EXPECT_EQ(r.stream.trial_count, 1000u);
  EXPECT_TRUE(r.stream.records.empty());
}

TEST(SampleTrials, IdenticalAcrossThreadCounts) {
  ExperimentConfig c;
  c.protocol.delta_t_ns = {100, 500};
  c.protocol.trials = 400001;
  const auto tables = build_outcome_tables(c);
  const auto one = sample_trials(c, tables, 1);
  EXPECT_EQ(analysis::encode(sample_trials(c, tables, 3).stream), analysis::encode(one.stream));
  EXPECT_EQ(analysis::encode(sample_trials(c, tables, 8).stream), analysis::encode(one.stream));
  c.seed += 1;
  EXPECT_NE(sample_trials(c, tables, 1).stream.records, one.stream.records);
}

TEST(SampleTrials, RecordsSitInsideTheirWindows) {
  ExperimentConfig c;
  c.protocol.delta_t_ns = {100, 1000};
  c.protocol.trials = 200000;
  const auto r = sample_trials(c, build_outcome_tables(c), 2);
  const auto groups = trial_groups(c);
  const auto w = write_window(c);
  for (const auto& rec : r.stream.records) {
    const auto& g = rec.trial_index < groups[1].first_trial ? groups[0] : groups[1];
    const auto win = rec.label == analysis::PulseLabel::Write ? w : read_window(c, g.delta_t_ns);
    ASSERT_GE(rec.time_ps, win.start_ps);
    ASSERT_LT(rec.time_ps, win.start_ps + win.length_ps);
  }
}

TEST(SampleTrials, TabulationReproducesPatternCounts) {
  ExperimentConfig c;
  c.protocol.delta_t_ns = {100, 700, 1500};
  c.protocol.trials = 600000;
  c.heating.a_heat = 0.3;
  const auto r = sample_trials(c, build_outcome_tables(c), 4);
  const auto table = analysis::tabulate(r.stream, spec_for(c));
  for (std::size_t g = 0; g < 3; ++g) {
    auto counts = table.pattern_counts(g);
    EXPECT_EQ(counts, r.pattern_counts[g]) << g;
  }
}

TEST(SampleTrials, FrequenciesMatchTable) {
  ExperimentConfig c;
  c.protocol.trials = 4000000;
  c.heating.a_heat = 0.3;
  const auto tables = build_outcome_tables(c);
  const auto r = sample_trials(c, tables, 4);
  const double n = double(c.protocol.trials);
  for (unsigned k = 0; k < 16; ++k) {
    const double p = tables[0].p[k];
    const double mean = n * p;
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_LE(std::abs(double(r.pattern_counts[0][k]) - mean), 4 * sd + 1) << "pattern " << k;
  }
}

}  // namespace
}  // namespace phononherald::sim
