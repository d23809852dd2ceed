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


// Binary time-tag stream. Little-endian throughout.
//
//   header (32 bytes): "PTT1", u16 version, u16 reserved, u64 config hash,
//                      u64 trial count, u64 record count
//   record (24 bytes): u64 trial index, u8 detector, u8 pulse label,
//                      u16 reserved, u64 time [ps], u32 pad

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phononherald::analysis {

enum class PulseLabel : std::uint8_t { Write = 0, Read = 1 };

struct TagRecord {
  std::uint64_t trial_index = 0;
  std::uint8_t detector = 0;
  PulseLabel label = PulseLabel::Write;
  /// Offset from the start of the trial.
  std::uint64_t time_ps = 0;

  friend bool operator==(const TagRecord&, const TagRecord&) = default;
};

struct TagStream {
  std::uint64_t config_hash = 0;
  std::uint64_t trial_count = 0;
  std::vector<TagRecord> records;

  friend bool operator==(const TagStream&, const TagStream&) = default;
};

inline constexpr std::uint16_t kTagStreamVersion = 1;
inline constexpr std::size_t kHeaderBytes = 32;
inline constexpr std::size_t kRecordBytes = 24;

std::vector<std::uint8_t> encode(const TagStream& stream);
/// Throws FormatError with the byte offset of the first problem.
TagStream decode(const std::vector<std::uint8_t>& bytes);

void write_tagstream(const std::string& path, const TagStream& stream);
TagStream read_tagstream(const std::string& path);

}  // namespace phononherald::analysis
