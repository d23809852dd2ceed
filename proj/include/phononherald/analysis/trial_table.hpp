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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "phononherald/analysis/tagstream.hpp"

namespace phononherald::analysis {

/// Bits of a per-trial click pattern: write detectors 1/2, read detectors 1/2.
inline constexpr std::uint8_t kWrite1 = 1, kWrite2 = 2, kRead1 = 4, kRead2 = 8;

struct GroupSpec {
  double delta_t_ns = 0;
  std::uint64_t first_trial = 0;
  std::uint64_t count = 0;
  std::uint64_t read_start_ps = 0;
  std::uint64_t read_length_ps = 0;
};

/// Where each detection window sits inside a trial, per delay group.
struct TabulationSpec {
  std::uint64_t write_start_ps = 0;
  std::uint64_t write_length_ps = 0;
  std::vector<GroupSpec> groups;
  /// Keep only read events in the first `read_trim_ns` of the read window.
  std::optional<double> read_trim_ns;
};

struct EventCounts {
  std::uint64_t trials = 0;
  std::uint64_t w1 = 0, w2 = 0, r1 = 0, r2 = 0;
  std::uint64_t w12 = 0, r12 = 0;
  std::uint64_t w_any = 0, r_any = 0;
  /// Trials with a click in both windows.
  std::uint64_t wr = 0;

  EventCounts& operator+=(const EventCounts& o);
  friend bool operator==(const EventCounts&, const EventCounts&) = default;
};

/// Sparse per-trial click patterns: trials without clicks are implicit.
class TrialTable {
 public:
  struct Entry {
    std::uint64_t trial;
    std::uint8_t pattern;
  };

  TrialTable(std::uint64_t trial_count, std::vector<GroupSpec> groups, std::vector<Entry> entries);

  std::uint64_t trial_count() const { return trial_count_; }
  const std::vector<GroupSpec>& groups() const { return groups_; }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Non-empty entries of one group, in trial order.
  std::vector<Entry> group_entries(std::size_t group) const;
  EventCounts counts(std::size_t group) const;
  /// Counts summed over all groups.
  EventCounts pooled() const;
  std::array<std::uint64_t, 16> pattern_counts(std::size_t group) const;

 private:
  std::uint64_t trial_count_;
  std::vector<GroupSpec> groups_;
  std::vector<Entry> entries_;
};

/// Throws FormatError if a record falls outside its window or trial range.
TrialTable tabulate(const TagStream& stream, const TabulationSpec& spec);

}  // namespace phononherald::analysis
