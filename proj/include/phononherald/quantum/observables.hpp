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

#include <string>

#include "phononherald/quantum/fock.hpp"

namespace phononherald::quantum {

/// Mean occupations below this are treated as true vacuum.
inline constexpr double kOccupationFloor = 1e-12;

template <typename Scalar>
Scalar mean_occupation(const ModeState<Scalar>& s) {
  const auto p = s.populations();
  Scalar mean = 0;
  for (int n = 1; n < p.size(); ++n) mean += Scalar(n) * p(n);
  return mean;
}

template <typename Scalar>
Scalar mean_occupation(const TwoModeFockState<Scalar>& s, Mode mode) {
  return mean_occupation(s.marginal(mode));
}

/// <n(n-1)> / <n>^2 on the truncated state.
template <typename Scalar>
Scalar g2_auto(const ModeState<Scalar>& s, Scalar floor = Scalar(kOccupationFloor)) {
  const auto p = s.populations();
  Scalar mean = 0, pairs = 0;
  for (int n = 1; n < p.size(); ++n) {
    mean += Scalar(n) * p(n);
    pairs += Scalar(n) * Scalar(n - 1) * p(n);
  }
  if (!(mean > floor)) {
    throw UndefinedCorrelationError("g2_auto: mean occupation " + std::to_string(double(mean)) +
                                    " is below the vacuum floor");
  }
  return pairs / (mean * mean);
}

template <typename Scalar>
Scalar g2_auto(const TwoModeFockState<Scalar>& s, Mode mode,
               Scalar floor = Scalar(kOccupationFloor)) {
  return g2_auto(s.marginal(mode), floor);
}

/// <n_A n_B> / (<n_A><n_B>).
template <typename Scalar>
Scalar g2_cross(const TwoModeFockState<Scalar>& s, Scalar floor = Scalar(kOccupationFloor)) {
  const auto p = s.joint_populations();
  Scalar mean_a = 0, mean_b = 0, joint = 0;
  for (int a = 0; a < s.levels(); ++a)
    for (int b = 0; b < s.levels(); ++b) {
      mean_a += Scalar(a) * p(a, b);
      mean_b += Scalar(b) * p(a, b);
      joint += Scalar(a) * Scalar(b) * p(a, b);
    }
  if (!(mean_a > floor) || !(mean_b > floor)) {
    throw UndefinedCorrelationError("g2_cross: a mean occupation is below the vacuum floor");
  }
  return joint / (mean_a * mean_b);
}

}  // namespace phononherald::quantum
