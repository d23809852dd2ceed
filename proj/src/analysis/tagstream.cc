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
#include <fstream>
#include <iterator>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

constexpr char kMagic[4] = {'P', 'T', 'T', '1'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t pos) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(in[pos + i]) << (8 * i);
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode(const TagStream& stream) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + kRecordBytes * stream.records.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put<std::uint16_t>(out, kTagStreamVersion);
  put<std::uint16_t>(out, 0);
  put<std::uint64_t>(out, stream.config_hash);
  put<std::uint64_t>(out, stream.trial_count);
  put<std::uint64_t>(out, stream.records.size());
  for (const auto& r : stream.records) {
    put<std::uint64_t>(out, r.trial_index);
    put<std::uint8_t>(out, r.detector);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(r.label));
    put<std::uint16_t>(out, 0);
    put<std::uint64_t>(out, r.time_ps);
    put<std::uint32_t>(out, 0);
  }
  return out;
}

TagStream decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("truncated header", bytes.size());
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic", 0);
  const auto version = get<std::uint16_t>(bytes, 4);
  if (version != kTagStreamVersion)
    throw FormatError("unsupported version " + std::to_string(version), 4);
  TagStream s;
  s.config_hash = get<std::uint64_t>(bytes, 8);
  s.trial_count = get<std::uint64_t>(bytes, 16);
  const auto count = get<std::uint64_t>(bytes, 24);
  const std::uint64_t available = (bytes.size() - kHeaderBytes) / kRecordBytes;
  if (count > available) {
    throw FormatError("truncated record " + std::to_string(available),
                      kHeaderBytes + available * kRecordBytes);
  }
  if (bytes.size() != kHeaderBytes + count * kRecordBytes) {
    throw FormatError("trailing bytes after last record", kHeaderBytes + count * kRecordBytes);
  }
  s.records.resize(count);
  std::uint64_t last_trial = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::size_t pos = kHeaderBytes + i * kRecordBytes;
    auto& r = s.records[i];
    r.trial_index = get<std::uint64_t>(bytes, pos);
    r.detector = bytes[pos + 8];
    const auto label = bytes[pos + 9];
    r.time_ps = get<std::uint64_t>(bytes, pos + 12);
    if (r.trial_index >= s.trial_count)
      throw FormatError("record " + std::to_string(i) + ": trial index beyond trial count", pos);
    if (r.trial_index < last_trial)
      throw FormatError("record " + std::to_string(i) + ": trial indices not ascending", pos);
    if (r.detector > 1) throw FormatError("record " + std::to_string(i) + ": detector not in {0,1}", pos + 8);
    if (label > 1) throw FormatError("record " + std::to_string(i) + ": unknown pulse label", pos + 9);
    r.label = static_cast<PulseLabel>(label);
    last_trial = r.trial_index;
  }
  return s;
}

void write_tagstream(const std::string& path, const TagStream& stream) {
  const auto bytes = encode(stream);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

TagStream read_tagstream(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path, 0);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

}  // namespace phononherald::analysis
