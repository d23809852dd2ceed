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

#include "phononherald/analysis/tagstream.hpp"

#include <cstring>
#include <filesystem>

#include <gtest/gtest.h>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

TagStream sample_stream() {
  TagStream s;
  s.config_hash = 0x0123456789abcdefULL;
  s.trial_count = 10;
  s.records = {{0, 0, PulseLabel::Write, 1234},
               {0, 1, PulseLabel::Read, 160000},
               {3, 1, PulseLabel::Write, 49999},
               {9, 0, PulseLabel::Read, 150000}};
  return s;
}

std::uint64_t decode_error_position(const std::vector<std::uint8_t>& bytes) {
  try {
    decode(bytes);
  } catch (const FormatError& e) {
    return e.position();
  }
  ADD_FAILURE() << "no FormatError";
  return UINT64_MAX;
}

TEST(TagStream, LayoutIsFixed) {
  const auto bytes = encode(sample_stream());
  ASSERT_EQ(bytes.size(), kHeaderBytes + 4 * kRecordBytes);
  EXPECT_EQ(std::memcmp(bytes.data(), "PTT1", 4), 0);
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[8], 0xef);   // hash, little-endian
  EXPECT_EQ(bytes[16], 10);    // trial count
  EXPECT_EQ(bytes[24], 4);     // record count
  const auto* rec = bytes.data() + kHeaderBytes + kRecordBytes;
  EXPECT_EQ(rec[0], 0);        // trial 0
  EXPECT_EQ(rec[8], 1);        // detector
  EXPECT_EQ(rec[9], 1);        // read label
  EXPECT_EQ(rec[12], 160000 & 0xff);
  for (int k : {10, 11, 20, 21, 22, 23}) EXPECT_EQ(rec[k], 0) << k;
}

TEST(TagStream, RoundTripIsExact) {
  const auto s = sample_stream();
  const auto bytes = encode(s);
  EXPECT_EQ(decode(bytes), s);
  EXPECT_EQ(encode(decode(bytes)), bytes);
}

TEST(TagStream, EmptyStreamRoundTrips) {
  TagStream s;
  s.trial_count = 0;
  EXPECT_EQ(decode(encode(s)), s);
}

TEST(TagStream, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "phononherald_tagstream_test.ptt";
  write_tagstream(path.string(), sample_stream());
  EXPECT_EQ(read_tagstream(path.string()), sample_stream());
  std::filesystem::remove(path);
  EXPECT_THROW(read_tagstream(path.string()), FormatError);
}

TEST(TagStream, RejectsMalformedInput) {
  const auto good = encode(sample_stream());
  const std::size_t second = kHeaderBytes + kRecordBytes;

  EXPECT_EQ(decode_error_position({good.begin(), good.begin() + 20}), 20u);
  auto bytes = good;
  bytes[0] = 'X';
  EXPECT_EQ(decode_error_position(bytes), 0u);
  bytes = good;
  bytes[4] = 2;
  EXPECT_EQ(decode_error_position(bytes), 4u);
  EXPECT_EQ(decode_error_position({good.begin(), good.end() - 5}), kHeaderBytes + 3 * kRecordBytes);
  bytes = good;
  bytes.push_back(0);
  EXPECT_EQ(decode_error_position(bytes), good.size());
  bytes = good;
  bytes[second + 8] = 2;
  EXPECT_EQ(decode_error_position(bytes), second + 8);
  bytes = good;
  bytes[second + 9] = 7;
  EXPECT_EQ(decode_error_position(bytes), second + 9);
  bytes = good;
  bytes[kHeaderBytes + 3 * kRecordBytes] = 10;  // trial 10 of 10
  EXPECT_EQ(decode_error_position(bytes), kHeaderBytes + 3 * kRecordBytes);
  bytes = good;
  bytes[kHeaderBytes + 2 * kRecordBytes] = 0;
  bytes[kHeaderBytes + kRecordBytes] = 5;  // 0, 5, 0: not ascending
  EXPECT_EQ(decode_error_position(bytes), kHeaderBytes + 2 * kRecordBytes);
}

}  // namespace
}  // namespace phononherald::analysis
