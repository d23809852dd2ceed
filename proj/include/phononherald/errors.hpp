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
#include <stdexcept>
#include <string>

namespace phononherald {

/// A Fock-space state lost too much population to its truncation boundary.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// g2 requested for a mode whose mean occupation is numerically zero.
class UndefinedCorrelationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A non-Gaussian preparation was handed to the covariance-matrix path.
class NonGaussianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration value out of range. `path()` names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Malformed tag stream. `position()` is the byte offset where decoding failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& message, std::uint64_t position)
      : std::runtime_error(message + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t position_;
};

/// An estimator was asked for a value its inputs cannot support.
class EstimationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace phononherald
