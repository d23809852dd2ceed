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

#include "phononherald/analysis/trial_table.hpp"

namespace phononherald::analysis {

/// Posterior mass left outside the interval on each side.
inline constexpr double kTailMass = 0.16;

struct BinomialCI {
  double p_ml = 0;
  double sigma_minus = 0;
  double sigma_plus = 0;
};

/// Maximum-likelihood N/T with an equal-tailed 68% interval of the
/// normalized binomial likelihood p^N (1-p)^(T-N).
BinomialCI binomial_ci(std::uint64_t events, std::uint64_t trials);

/// Mass of the normalized likelihood on [0, x].
double binomial_likelihood_cdf(std::uint64_t events, std::uint64_t trials, double x);

struct CorrelationEstimate {
  double value = 0;
  double sigma_minus = 0;
  double sigma_plus = 0;
  std::uint64_t coincidences = 0;
  std::uint64_t trials = 0;
  std::uint64_t singles_x = 0;
  std::uint64_t singles_y = 0;

  double lower() const { return value - sigma_minus; }
  double upper() const { return value + sigma_plus; }
};

/// g2 = P(X and Y) / (P(X) P(Y)); the interval comes from the coincidence
/// likelihood with the singles held at their ML values.
CorrelationEstimate correlation_from_counts(std::uint64_t coincidences, std::uint64_t singles_x,
                                            std::uint64_t singles_y, std::uint64_t trials);

/// Write of trial n against read of trial n + delta_n inside one delay group.
CorrelationEstimate g2_cross_estimate(const TrialTable& table, std::size_t group,
                                      std::int64_t delta_n);

enum class Window { Write, Read };

/// Write autocorrelation pools every group; read uses only `group`.
CorrelationEstimate g2_auto_estimate(const TrialTable& table, Window window, std::size_t group);

/// Grid used for the likelihood convolution of the classical bound.
struct BoundGrid {
  int points = 4096;
  double lo = 1e-3;
  double hi = 1e3;
};

/// Likelihood of sqrt(g_oo g_mm) from the two autocorrelation likelihoods.
/// Returns the ML of the product, square-rooted, with a 68% interval.
CorrelationEstimate classical_bound(const CorrelationEstimate& auto_write,
                                    const CorrelationEstimate& auto_read, const BoundGrid& grid = {});

struct Verdict {
  bool violated = false;
  /// (cross lower edge - bound upper edge) / (cross sigma_minus + bound sigma_plus).
  double margin = 0;
  double separation = 0;
};

Verdict cauchy_schwarz_test(const CorrelationEstimate& cross, const CorrelationEstimate& bound);

/// n = G_R / (G_B - G_R) after subtracting the leak rate from both.
double sideband_occupancy(double rate_red, double rate_blue, double leak_rate);

struct Occupancy {
  double value = 0;
  double sigma_minus = 0;
  double sigma_plus = 0;
};

/// Count-based version with an interval propagated from the three binomial
/// likelihoods. Each count is out of `trials` pulses.
Occupancy sideband_occupancy(std::uint64_t red, std::uint64_t blue, std::uint64_t leak,
                             std::uint64_t trials);

struct HeraldedAutocorr {
  double value = 0;
  /// The 4/(g-1) form assumes g >> 1; set when g < 5.
  bool approximate = false;
};

HeraldedAutocorr heralded_autocorr(double g_om);

struct FockPopulations {
  double p0 = 0;
  double p1 = 0;
  double p_gt1 = 0;
};

/// Solves p0 = p_false, 2 p_gt1 = g_her p1^2, p0 + p1 + p_gt1 = 1.
FockPopulations fock_fidelity(double g_her, double p_false);

}  // namespace phononherald::analysis
