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

#include "phononherald/analysis/statistics.hpp"

#include <cmath>
#include <random>

#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

TEST(BinomialCI, NoEventsClosedForm) {
  const auto ci = binomial_ci(0, 100);
  EXPECT_EQ(ci.p_ml, 0);
  EXPECT_EQ(ci.sigma_minus, 0);
  EXPECT_NEAR(ci.sigma_plus, 1 - std::pow(0.16, 1.0 / 101), 1e-6);
  EXPECT_NEAR(ci.sigma_plus, 0.01798, 1e-5);
}

TEST(BinomialCI, AllEventsMirrorsNoEvents) {
  const auto none = binomial_ci(0, 100), all = binomial_ci(100, 100);
  EXPECT_EQ(all.p_ml, 1);
  EXPECT_EQ(all.sigma_plus, 0);
  EXPECT_NEAR(all.sigma_minus, none.sigma_plus, 1e-9);
}

TEST(BinomialCI, GaussianLimit) {
  const auto ci = binomial_ci(100, 10000);
  const double sd = std::sqrt(0.01 * 0.99 / 10000);
  // The equal-tailed interval sits skewed around N / T; its half-width
  // is the Gaussian one.
  EXPECT_NEAR(0.5 * (ci.sigma_minus + ci.sigma_plus), sd, 0.05 * sd);
  EXPECT_LT(ci.sigma_minus, ci.sigma_plus);
  EXPECT_NEAR(ci.sigma_minus, sd, 0.15 * sd);
  EXPECT_NEAR(ci.sigma_plus, sd, 0.15 * sd);
}

TEST(BinomialCI, MatchesBetaQuantiles) {
  // The normalized likelihood is the Beta(N + 1, T - N + 1) density.
  for (auto [n, t] : {std::pair<std::uint64_t, std::uint64_t>{1, 10}, {3, 10}, {7, 50}, {11, 8523},
                      {250, 1000}, {10, 10000000}, {4000, 10000000}}) {
    const auto ci = binomial_ci(n, t);
    const double a = double(n + 1), b = double(t - n + 1);
    const double lo = boost::math::ibeta_inv(a, b, kTailMass);
    const double hi = boost::math::ibeta_inv(a, b, 1 - kTailMass);
    EXPECT_NEAR(ci.p_ml - ci.sigma_minus, lo, 1e-6 * (hi - lo)) << n << "/" << t;
    EXPECT_NEAR(ci.p_ml + ci.sigma_plus, hi, 1e-6 * (hi - lo)) << n << "/" << t;
  }
}

TEST(BinomialCI, ExhaustedLowerSideIsClamped) {
  // With one event in two trials the mass below p = 0.5 is exactly one half,
  // but with one in a thousand the mass below the ML is below 0.16 only
  // for very few events; N = 1, T = 3 keeps it above.
  for (auto [n, t] : {std::pair<std::uint64_t, std::uint64_t>{1, 3}, {1, 1000}}) {
    const auto ci = binomial_ci(n, t);
    EXPECT_GE(ci.sigma_minus, 0);
    EXPECT_LE(ci.sigma_minus, ci.p_ml);
  }
}

TEST(BinomialCI, LikelihoodCdfIsRegularizedBeta) {
  for (double x : {0.001, 0.01, 0.05, 0.2})
    EXPECT_NEAR(binomial_likelihood_cdf(5, 200, x), boost::math::ibeta(6.0, 196.0, x), 1e-9) << x;
  EXPECT_NEAR(binomial_likelihood_cdf(5, 200, 1), 1, 1e-9);
}

TEST(BinomialCI, RejectsInvalidCounts) {
  EXPECT_THROW(binomial_ci(0, 0), EstimationError);
  EXPECT_THROW(binomial_ci(5, 4), EstimationError);
}

TEST(BinomialCI, CoverageNearSixtyEightPercent) {
  std::mt19937_64 rng(12345);
  for (double p : {0.02, 0.1, 0.4}) {
    std::binomial_distribution<std::uint64_t> draw(500, p);
    int covered = 0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
      const auto ci = binomial_ci(draw(rng), 500);
      covered += p >= ci.p_ml - ci.sigma_minus && p <= ci.p_ml + ci.sigma_plus;
    }
    const double coverage = double(covered) / draws;
    EXPECT_GE(coverage, 0.63) << p;
    EXPECT_LE(coverage, 0.73) << p;
  }
}

TEST(Correlation, PerfectlyCorrelated) {
  const auto e = correlation_from_counts(250, 250, 250, 1000);
  EXPECT_DOUBLE_EQ(e.value, 4);
}

TEST(Correlation, IntervalScalesTheCoincidenceInterval) {
  const auto e = correlation_from_counts(12, 8000, 1500, 10000000);
  const auto ci = binomial_ci(12, 10000000);
  const double scale = 1e14 / (8000.0 * 1500.0);
  EXPECT_NEAR(e.value, 12 * 1e7 / (8000.0 * 1500.0), 1e-12);
  EXPECT_NEAR(e.sigma_minus, ci.sigma_minus * scale, 1e-12);
  EXPECT_NEAR(e.sigma_plus, ci.sigma_plus * scale, 1e-12);
  EXPECT_EQ(e.coincidences, 12u);
}

TEST(Correlation, NoCoincidencesGiveOneSidedInterval) {
  const auto e = correlation_from_counts(0, 900, 700, 10000000);
  EXPECT_EQ(e.value, 0);
  EXPECT_EQ(e.sigma_minus, 0);
  EXPECT_GT(e.sigma_plus, 0);
}

TEST(Correlation, ZeroSinglesAreUndefined) {
  EXPECT_THROW(correlation_from_counts(0, 0, 10, 100), UndefinedCorrelationError);
  EXPECT_THROW(correlation_from_counts(0, 10, 0, 100), UndefinedCorrelationError);
}

TEST(CauchySchwarz, QuotedValuesViolate) {
  CorrelationEstimate cross{8.0, 0.5, 0.6}, bound{2.09, 0.16, 0.23};
  const auto v = cauchy_schwarz_test(cross, bound);
  EXPECT_TRUE(v.violated);
  EXPECT_NEAR(v.separation, 7.5 - 2.32, 1e-12);
  EXPECT_NEAR(v.margin, (7.5 - 2.32) / 0.73, 1e-12);
}

TEST(CauchySchwarz, IndependentTrialsDoNotViolate) {
  const auto v = cauchy_schwarz_test({1.04, 0.04, 0.04}, {2.09, 0.16, 0.23});
  EXPECT_FALSE(v.violated);
  EXPECT_LT(v.margin, 0);
}

TEST(CauchySchwarz, IdenticalEstimatesDoNotViolate) {
  const CorrelationEstimate e{2.0, 0.1, 0.2};
  const auto v = cauchy_schwarz_test(e, e);
  EXPECT_FALSE(v.violated);
  EXPECT_LE(v.margin, 0);
}

TEST(Sideband, RateAsymmetryOfFortyOne) {
  EXPECT_NEAR(sideband_occupancy(1.0, 41.0, 0.0), 0.025, 1e-15);
  EXPECT_NEAR(sideband_occupancy(1.5, 41.5, 0.5), 0.025, 1e-15);
  EXPECT_EQ(sideband_occupancy(0.0, 3.0, 0.0), 0);
}

TEST(Sideband, PoleIsAnError) {
  EXPECT_THROW(sideband_occupancy(2.0, 2.0, 0.0), EstimationError);
  EXPECT_THROW(sideband_occupancy(3.0, 2.0, 0.0), EstimationError);
  EXPECT_THROW(sideband_occupancy(std::uint64_t{20}, 20, 0, 1000), EstimationError);
}

TEST(Sideband, CountIntervalBracketsTheValue) {
  const auto o = sideband_occupancy(std::uint64_t{2500}, 102500, 0, 100000000);
  EXPECT_NEAR(o.value, 0.025, 1e-12);
  EXPECT_GT(o.sigma_minus, 0);
  EXPECT_GT(o.sigma_plus, 0);
  // Dominated by the red count: relative error about 1 / sqrt(2500).
  EXPECT_NEAR(0.5 * (o.sigma_minus + o.sigma_plus) / o.value, 0.02, 0.002);
}

TEST(Sideband, GroundStateGivesZeroWithUpperInterval) {
  const auto o = sideband_occupancy(std::uint64_t{30}, 700, 32, 1000000);
  EXPECT_EQ(o.value, 0);
  EXPECT_EQ(o.sigma_minus, 0);
  EXPECT_GT(o.sigma_plus, 0);
}

TEST(HeraldedState, AutocorrelationFromCrossCorrelation) {
  const auto h = heralded_autocorr(19.6);
  EXPECT_NEAR(h.value, 0.215, 0.005);
  EXPECT_FALSE(h.approximate);
  EXPECT_LT(heralded_autocorr(1e12).value, 1e-11);
  EXPECT_TRUE(heralded_autocorr(3).approximate);
  EXPECT_THROW(heralded_autocorr(1), EstimationError);
  EXPECT_THROW(heralded_autocorr(0.5), EstimationError);
}

TEST(HeraldedState, FockFidelity) {
  const auto f = fock_fidelity(0.215, 0.04);
  EXPECT_NEAR(f.p1, 0.877, 0.005);
  EXPECT_NEAR(f.p0 + f.p1 + f.p_gt1, 1, 1e-15);
  EXPECT_NEAR(2 * f.p_gt1, 0.215 * f.p1 * f.p1, 1e-15);
  EXPECT_EQ(fock_fidelity(0, 0).p1, 1);
  EXPECT_NEAR(fock_fidelity(0, 0.04).p1, 0.96, 1e-15);
  EXPECT_THROW(fock_fidelity(-1, 0), EstimationError);
  EXPECT_THROW(fock_fidelity(0.2, 1), EstimationError);
}

}  // namespace
}  // namespace phononherald::analysis
