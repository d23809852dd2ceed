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

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>
#include <cmath>
#include <limits>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

double basis(ExpModel model, double t, double tau) {
  const double e = std::exp(-t / tau);
  return model == ExpModel::Decay ? e : 1 - e;
}

// Parameters: amplitude, log tau, offset. Data already scaled to O(1).
struct Residuals {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Eigen::VectorXd& t;
  const Eigen::VectorXd& y;
  ExpModel model;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(t.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const double tau = std::exp(x(1));
    for (Eigen::Index i = 0; i < t.size(); ++i) f(i) = x(2) + x(0) * basis(model, t(i), tau) - y(i);
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    const double tau = std::exp(x(1));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double e = std::exp(-t(i) / tau);
      // d/d(log tau) of exp(-t/tau) is (t/tau) exp(-t/tau).
      const double de = (t(i) / tau) * e;
      j(i, 0) = basis(model, t(i), tau);
      j(i, 1) = x(0) * (model == ExpModel::Decay ? de : -de);
      j(i, 2) = 1;
    }
    return 0;
  }
};

// Best (amplitude, offset) for fixed tau, and the resulting squared error.
double linear_solve(const Eigen::VectorXd& t, const Eigen::VectorXd& y, ExpModel model, double tau,
                    double& amplitude, double& offset) {
  Eigen::MatrixXd a(t.size(), 2);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    a(i, 0) = basis(model, t(i), tau);
    a(i, 1) = 1;
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  amplitude = c(0);
  offset = c(1);
  return (a * c - y).squaredNorm();
}

}  // namespace

ExpFit fit_exponential(const std::vector<double>& tv, const std::vector<double>& yv, ExpModel model) {
  if (tv.size() != yv.size()) throw EstimationError("fit_exponential: t and y differ in length");
  if (tv.size() < 4) throw EstimationError("fit_exponential: at least four points are required");
  for (std::size_t i = 1; i < tv.size(); ++i)
    if (!(tv[i] > tv[i - 1])) throw EstimationError("fit_exponential: t must be strictly ascending");

  const Eigen::Map<const Eigen::VectorXd> t_raw(tv.data(), tv.size());
  const Eigen::Map<const Eigen::VectorXd> y_raw(yv.data(), yv.size());
  ExpFit fit;
  const double mean = y_raw.mean();
  const double spread = y_raw.maxCoeff() - y_raw.minCoeff();
  if (spread <= 1e-12 * std::max(1.0, std::abs(mean))) {
    fit.offset = mean;
    fit.time_constant = std::numeric_limits<double>::quiet_NaN();
    fit.residuals.resize(yv.size());
    for (std::size_t i = 0; i < yv.size(); ++i) fit.residuals[i] = yv[i] - mean;
    fit.rms_residual = std::sqrt((y_raw.array() - mean).square().mean());
    return fit;
  }

  const Eigen::VectorXd y = (y_raw.array() - mean) / spread;
  const Eigen::VectorXd t = t_raw;

  // Seed tau on a log grid with the linear parameters solved exactly.
  const double span = tv.back() - tv.front();
  double min_step = span;
  for (std::size_t i = 1; i < tv.size(); ++i) min_step = std::min(min_step, tv[i] - tv[i - 1]);
  const double tau_lo = min_step / 10, tau_hi = 10 * (tv.back() > 0 ? tv.back() : span);
  Eigen::VectorXd x(3);
  double best = INFINITY;
  for (int k = 0; k < 400; ++k) {
    const double tau = tau_lo * std::pow(tau_hi / tau_lo, k / 399.0);
    double a = 0, c = 0;
    const double sse = linear_solve(t, y, model, tau, a, c);
    if (sse < best) {
      best = sse;
      x << a, std::log(tau), c;
    }
  }

  Residuals functor{t, y, model};
  Eigen::LevenbergMarquardt<Residuals> lm(functor);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(x);
  using Status = Eigen::LevenbergMarquardtSpace::Status;
  if (status == Status::ImproperInputParameters || status == Status::TooManyFunctionEvaluation ||
      !x.allFinite()) {
    throw EstimationError("fit_exponential: iteration did not converge");
  }

  fit.amplitude = x(0) * spread;
  fit.time_constant = std::exp(x(1));
  fit.offset = x(2) * spread + mean;
  fit.residuals.resize(yv.size());
  double ss = 0;
  for (std::size_t i = 0; i < yv.size(); ++i) {
    const double model_y = fit.offset + fit.amplitude * basis(model, tv[i], fit.time_constant);
    fit.residuals[i] = yv[i] - model_y;
    ss += fit.residuals[i] * fit.residuals[i];
  }
  fit.rms_residual = std::sqrt(ss / double(yv.size()));
  return fit;
}

}  // namespace phononherald::analysis
