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

#include "phononherald/analysis/trial_table.hpp"

#include <gtest/gtest.h>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

// Write window [0, 50 ns); read windows start 100 ns after it, 55 ns long.
TabulationSpec two_groups(std::uint64_t first, std::uint64_t second) {
  TabulationSpec spec;
  spec.write_length_ps = 50000;
  spec.groups = {{100, 0, first, 150000, 55000}, {500, first, second, 550000, 55000}};
  return spec;
}

TagStream stream_with(std::uint64_t trials, std::vector<TagRecord> records) {
  TagStream s;
  s.trial_count = trials;
  s.records = std::move(records);
  return s;
}

TEST(Tabulate, EmptyStream) {
  const auto t = tabulate(stream_with(10, {}), two_groups(6, 4));
  EXPECT_EQ(t.pooled(), (EventCounts{10}));
  EXPECT_EQ(t.counts(1).trials, 4u);
  EXPECT_EQ(t.pattern_counts(0)[0], 6u);
}

TEST(Tabulate, SingleWriteClick) {
  const auto t = tabulate(stream_with(10, {{0, 1, PulseLabel::Write, 10}}), two_groups(6, 4));
  EventCounts expected{6};
  expected.w2 = expected.w_any = 1;
  EXPECT_EQ(t.counts(0), expected);
  EXPECT_EQ(t.counts(1), (EventCounts{4}));
}

TEST(Tabulate, CountersAreConsistent) {
  const auto t = tabulate(stream_with(10, {{1, 0, PulseLabel::Write, 0},
                                           {1, 1, PulseLabel::Write, 49999},
                                           {1, 1, PulseLabel::Read, 150000},
                                           {2, 0, PulseLabel::Read, 204999},
                                           {2, 1, PulseLabel::Read, 160000},
                                           {7, 0, PulseLabel::Write, 5},
                                           {7, 0, PulseLabel::Read, 550000}}),
                         two_groups(6, 4));
  const auto c = t.counts(0);
  EXPECT_EQ(c.w1, 1u);
  EXPECT_EQ(c.w2, 1u);
  EXPECT_EQ(c.w12, 1u);
  EXPECT_EQ(c.r1, 1u);
  EXPECT_EQ(c.r2, 2u);
  EXPECT_EQ(c.r12, 1u);
  EXPECT_EQ(c.wr, 1u);
  EXPECT_EQ(t.counts(1).wr, 1u);
  EXPECT_EQ(t.pattern_counts(0)[kWrite1 | kWrite2 | kRead2], 1u);
  EXPECT_EQ(t.pattern_counts(0)[kRead1 | kRead2], 1u);
  const auto p = t.pooled();
  EXPECT_LE(p.wr, std::min(p.w_any, p.r_any));
  EXPECT_LE(p.w12, std::min(p.w1, p.w2));
}

TEST(Tabulate, TrimDropsLateReadTags) {
  auto spec = two_groups(6, 4);
  spec.read_trim_ns = 30;
  const auto t = tabulate(stream_with(10, {{2, 0, PulseLabel::Read, 150000 + 29999},
                                           {3, 0, PulseLabel::Read, 150000 + 30000},
                                           {3, 0, PulseLabel::Write, 100}}),
                         spec);
  const auto c = t.counts(0);
  EXPECT_EQ(c.r1, 1u);
  EXPECT_EQ(c.w1, 1u);
  EXPECT_EQ(c.wr, 0u);
}

TEST(Tabulate, RejectsTagsOutsideWindows) {
  const auto spec = two_groups(6, 4);
  try {
    tabulate(stream_with(10, {{0, 0, PulseLabel::Write, 1}, {7, 0, PulseLabel::Read, 150000}}), spec);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.position(), kHeaderBytes + kRecordBytes + 12);
  }
  EXPECT_THROW(tabulate(stream_with(10, {{0, 0, PulseLabel::Write, 50000}}), spec), FormatError);
}

TEST(Tabulate, RejectsGroupsThatDoNotCoverTheStream) {
  EXPECT_THROW(tabulate(stream_with(11, {}), two_groups(6, 4)), FormatError);
  auto spec = two_groups(6, 4);
  spec.groups[1].first_trial = 7;
  EXPECT_THROW(tabulate(stream_with(10, {}), spec), FormatError);
}

}  // namespace
}  // namespace phononherald::analysis
