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

#include <vector>

namespace phononherald::analysis {

enum class ExpModel {
  /// y = offset + amplitude exp(-t / tau)
  Decay,
  /// y = offset + amplitude (1 - exp(-t / tau))
  Rise,
};

struct ExpFit {
  double amplitude = 0;
  /// NaN when the series is constant and tau is undetermined.
  double time_constant = 0;
  double offset = 0;
  double rms_residual = 0;
  std::vector<double> residuals;
};

/// Least-squares fit. Throws EstimationError for fewer than four points,
/// unordered times, or when the iteration does not converge.
ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& y, ExpModel model);

}  // namespace phononherald::analysis
