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

#include <algorithm>
#include <cmath>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {

EventCounts& EventCounts::operator+=(const EventCounts& o) {
  trials += o.trials;
  w1 += o.w1;
  w2 += o.w2;
  r1 += o.r1;
  r2 += o.r2;
  w12 += o.w12;
  r12 += o.r12;
  w_any += o.w_any;
  r_any += o.r_any;
  wr += o.wr;
  return *this;
}

TrialTable::TrialTable(std::uint64_t trial_count, std::vector<GroupSpec> groups,
                       std::vector<Entry> entries)
    : trial_count_(trial_count), groups_(std::move(groups)), entries_(std::move(entries)) {}

std::vector<TrialTable::Entry> TrialTable::group_entries(std::size_t group) const {
  const auto& g = groups_.at(group);
  auto by_trial = [](const Entry& e, std::uint64_t t) { return e.trial < t; };
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), g.first_trial, by_trial);
  auto hi = std::lower_bound(lo, entries_.end(), g.first_trial + g.count, by_trial);
  return {lo, hi};
}

EventCounts TrialTable::counts(std::size_t group) const {
  EventCounts c;
  c.trials = groups_.at(group).count;
  for (const auto& e : group_entries(group)) {
    const auto p = e.pattern;
    c.w1 += (p & kWrite1) != 0;
    c.w2 += (p & kWrite2) != 0;
    c.r1 += (p & kRead1) != 0;
    c.r2 += (p & kRead2) != 0;
    c.w12 += (p & (kWrite1 | kWrite2)) == (kWrite1 | kWrite2);
    c.r12 += (p & (kRead1 | kRead2)) == (kRead1 | kRead2);
    const bool w = p & (kWrite1 | kWrite2), r = p & (kRead1 | kRead2);
    c.w_any += w;
    c.r_any += r;
    c.wr += w && r;
  }
  return c;
}

EventCounts TrialTable::pooled() const {
  EventCounts total;
  for (std::size_t g = 0; g < groups_.size(); ++g) total += counts(g);
  return total;
}

std::array<std::uint64_t, 16> TrialTable::pattern_counts(std::size_t group) const {
  std::array<std::uint64_t, 16> out{};
  std::uint64_t clicked = 0;
  for (const auto& e : group_entries(group)) {
    ++out[e.pattern];
    ++clicked;
  }
  out[0] = groups_.at(group).count - clicked;
  return out;
}

TrialTable tabulate(const TagStream& stream, const TabulationSpec& spec) {
  std::uint64_t covered = 0;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    if (spec.groups[g].first_trial != covered)
      throw FormatError("delay groups do not tile the trial range", 16);
    covered += spec.groups[g].count;
  }
  if (covered != stream.trial_count) {
    throw FormatError("stream holds " + std::to_string(stream.trial_count) +
                          " trials but the configuration describes " + std::to_string(covered),
                      16);
  }
  std::uint64_t trim_ps = UINT64_MAX;
  if (spec.read_trim_ns) {
    if (!(*spec.read_trim_ns > 0)) throw std::invalid_argument("read window trim must be > 0");
    trim_ps = static_cast<std::uint64_t>(std::llround(*spec.read_trim_ns * 1e3));
  }

  std::vector<TrialTable::Entry> entries;
  std::size_t g = 0;
  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const auto& r = stream.records[i];
    const std::uint64_t pos = kHeaderBytes + i * kRecordBytes;
    if (r.trial_index >= stream.trial_count)
      throw FormatError("record " + std::to_string(i) + ": trial index out of range", pos);
    if (!entries.empty() && r.trial_index < entries.back().trial)
      throw FormatError("record " + std::to_string(i) + ": trial indices not ascending", pos);
    while (r.trial_index >= spec.groups[g].first_trial + spec.groups[g].count) ++g;
    const auto& group = spec.groups[g];
    std::uint8_t bit = 0;
    if (r.label == PulseLabel::Write) {
      if (r.time_ps < spec.write_start_ps || r.time_ps >= spec.write_start_ps + spec.write_length_ps)
        throw FormatError("record " + std::to_string(i) + ": write tag outside the write window",
                          pos + 12);
      bit = r.detector == 0 ? kWrite1 : kWrite2;
    } else {
      if (r.time_ps < group.read_start_ps || r.time_ps >= group.read_start_ps + group.read_length_ps)
        throw FormatError("record " + std::to_string(i) + ": read tag outside the read window",
                          pos + 12);
      if (r.time_ps - group.read_start_ps >= trim_ps) continue;
      bit = r.detector == 0 ? kRead1 : kRead2;
    }
    if (entries.empty() || entries.back().trial != r.trial_index) entries.push_back({r.trial_index, 0});
    entries.back().pattern |= bit;
  }
  return TrialTable(stream.trial_count, spec.groups, std::move(entries));
}

}  // namespace phononherald::analysis
