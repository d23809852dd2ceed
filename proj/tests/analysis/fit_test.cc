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

#include "phononherald/analysis/fit.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(lo + (hi - lo) * i / (n - 1));
  return t;
}

TEST(FitExponential, RecoversDecay) {
  const auto t = grid(5, 200, 40);
  std::vector<double> y;
  for (double x : t) y.push_back(2.4e-4 * std::exp(-x / 34.4) + 6.7e-5);
  const auto f = fit_exponential(t, y, ExpModel::Decay);
  EXPECT_NEAR(f.time_constant, 34.4, 34.4e-6);
  EXPECT_NEAR(f.amplitude, 2.4e-4, 2.4e-10);
  EXPECT_NEAR(f.offset, 6.7e-5, 1e-12);
  EXPECT_LT(f.rms_residual, 1e-12);
  EXPECT_EQ(f.residuals.size(), t.size());
}

TEST(FitExponential, RecoversRise) {
  const auto t = grid(0, 3, 31);
  std::vector<double> y;
  for (double x : t) y.push_back(0.3 * (1 - std::exp(-x / 0.37)) + 0.025);
  const auto f = fit_exponential(t, y, ExpModel::Rise);
  EXPECT_NEAR(f.time_constant, 0.37, 0.37e-6);
  EXPECT_NEAR(f.amplitude, 0.3, 0.3e-6);
  EXPECT_NEAR(f.offset, 0.025, 1e-9);
}

TEST(FitExponential, ToleratesNoise) {
  const auto t = grid(0, 150, 60);
  std::vector<double> y;
  for (std::size_t i = 0; i < t.size(); ++i)
    y.push_back(1.0 * std::exp(-t[i] / 34.4) + 0.1 + ((i % 2) ? 0.004 : -0.004));
  const auto f = fit_exponential(t, y, ExpModel::Decay);
  EXPECT_NEAR(f.time_constant, 34.4, 0.02 * 34.4);
  EXPECT_NEAR(f.rms_residual, 0.004, 0.001);
}

TEST(FitExponential, ConstantSeries) {
  const auto t = grid(0, 10, 8);
  const std::vector<double> y(t.size(), 0.7);
  for (auto model : {ExpModel::Decay, ExpModel::Rise}) {
    const auto f = fit_exponential(t, y, model);
    EXPECT_NEAR(f.amplitude, 0, 1e-12);
    EXPECT_NEAR(f.offset, 0.7, 1e-12);
    EXPECT_TRUE(std::isnan(f.time_constant));
  }
}

TEST(FitExponential, RejectsBadInput) {
  EXPECT_THROW(fit_exponential({0, 1, 2}, {1, 2, 3}, ExpModel::Decay), EstimationError);
  EXPECT_THROW(fit_exponential({0, 2, 1, 3}, {1, 2, 3, 4}, ExpModel::Decay), EstimationError);
  EXPECT_THROW(fit_exponential({0, 1, 2, 3}, {1, 2, 3}, ExpModel::Decay), EstimationError);
}

}  // namespace
}  // namespace phononherald::analysis
