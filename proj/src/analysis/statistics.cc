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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "phononherald/errors.hpp"

namespace phononherald::analysis {
namespace {

// Normalized binomial likelihood in p, i.e. a Beta(N+1, T-N+1) density.
class Likelihood {
 public:
  Likelihood(std::uint64_t n, std::uint64_t t) : n_(double(n)), m_(double(t - n)) {
    log_norm_ = std::lgamma(n_ + m_ + 2) - std::lgamma(n_ + 1) - std::lgamma(m_ + 1);
    const double mean = (n_ + 1) / (n_ + m_ + 2);
    mode_ = n_ / (n_ + m_);
    sd_ = std::sqrt(mean * (1 - mean) / (n_ + m_ + 3));
    lo_ = std::max(0.0, mean - 40 * sd_);
    hi_ = std::min(1.0, mean + 40 * sd_);
  }

  double pdf(double p) const {
    double lp = log_norm_;
    if (n_ > 0) lp += p > 0 ? n_ * std::log(p) : -INFINITY;
    if (m_ > 0) lp += p < 1 ? m_ * std::log1p(-p) : -INFINITY;
    return std::exp(lp);
  }

  // Adaptive Gauss-Kronrod on pieces no wider than two standard deviations,
  // so the peak is never stepped over.
  double integrate(double a, double b) const {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (!(b > a)) return 0;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (2 * sd_))));
    const double w = (b - a) / pieces;
    double total = 0;
    for (int i = 0; i < pieces; ++i) {
      const double x0 = a + i * w, x1 = x0 + w;
      // Pieces far out in a tail contribute nothing measurable.
      if (std::max(pdf(x0), pdf(x1)) * w < 1e-18 && (x1 < mode_ || x0 > mode_)) continue;
      total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          [this](double p) { return pdf(p); }, x0, x1, 8, 1e-11);
    }
    return total;
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double n_, m_, log_norm_, sd_, lo_, hi_, mode_;
};

template <typename F>
double solve(F f, double a, double b) {
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t iters = 200;
  const double fa = f(a), fb = f(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double binomial_likelihood_cdf(std::uint64_t events, std::uint64_t trials, double x) {
  if (trials == 0) throw EstimationError("binomial likelihood needs at least one trial");
  if (events > trials) throw EstimationError("binomial likelihood: events exceed trials");
  const Likelihood like(events, trials);
  return like.integrate(0, x);
}

BinomialCI binomial_ci(std::uint64_t events, std::uint64_t trials) {
  if (trials == 0) throw EstimationError("binomial_ci: T = 0");
  if (events > trials) throw EstimationError("binomial_ci: N > T");
  const Likelihood like(events, trials);
  BinomialCI ci;
  ci.p_ml = double(events) / double(trials);
  if (events > 0) {
    const double below = like.integrate(0, ci.p_ml);
    if (below <= kTailMass) {
      ci.sigma_minus = ci.p_ml;
    } else {
      const double x = solve([&](double v) { return like.integrate(0, v) - kTailMass; },
                             like.lo(), ci.p_ml);
      ci.sigma_minus = ci.p_ml - x;
    }
  }
  if (events < trials) {
    const double above = like.integrate(ci.p_ml, 1);
    if (above <= kTailMass) {
      ci.sigma_plus = 1 - ci.p_ml;
    } else {
      const double x = solve([&](double v) { return like.integrate(v, 1) - kTailMass; }, ci.p_ml,
                             like.hi());
      ci.sigma_plus = x - ci.p_ml;
    }
  }
  return ci;
}

CorrelationEstimate correlation_from_counts(std::uint64_t coincidences, std::uint64_t singles_x,
                                            std::uint64_t singles_y, std::uint64_t trials) {
  if (trials == 0) throw EstimationError("correlation estimate: no trials");
  if (singles_x == 0 || singles_y == 0)
    throw UndefinedCorrelationError("correlation estimate: a single-event count is zero");
  const double t = double(trials);
  const double scale = t * t / (double(singles_x) * double(singles_y));
  const auto ci = binomial_ci(coincidences, trials);
  CorrelationEstimate e;
  e.value = ci.p_ml * scale;
  e.sigma_minus = ci.sigma_minus * scale;
  e.sigma_plus = ci.sigma_plus * scale;
  e.coincidences = coincidences;
  e.trials = trials;
  e.singles_x = singles_x;
  e.singles_y = singles_y;
  return e;
}

CorrelationEstimate g2_cross_estimate(const TrialTable& table, std::size_t group,
                                      std::int64_t delta_n) {
  const auto& g = table.groups().at(group);
  const std::uint64_t shift = static_cast<std::uint64_t>(std::llabs(delta_n));
  if (shift >= g.count) throw EstimationError("g2_cross_estimate: |delta n| leaves no trial pairs");
  // Pair write of trial n with read of trial n + delta_n.
  const std::uint64_t write_begin = g.first_trial + (delta_n < 0 ? shift : 0);
  const std::uint64_t read_begin = g.first_trial + (delta_n > 0 ? shift : 0);
  const std::uint64_t pairs = g.count - shift;
  std::vector<std::uint64_t> writes, reads;
  for (const auto& e : table.group_entries(group)) {
    if ((e.pattern & (kWrite1 | kWrite2)) && e.trial >= write_begin && e.trial < write_begin + pairs)
      writes.push_back(e.trial - write_begin);
    if ((e.pattern & (kRead1 | kRead2)) && e.trial >= read_begin && e.trial < read_begin + pairs)
      reads.push_back(e.trial - read_begin);
  }
  std::uint64_t both = 0;
  for (std::size_t i = 0, j = 0; i < writes.size() && j < reads.size();) {
    if (writes[i] == reads[j]) {
      ++both;
      ++i;
      ++j;
    } else if (writes[i] < reads[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return correlation_from_counts(both, writes.size(), reads.size(), pairs);
}

CorrelationEstimate g2_auto_estimate(const TrialTable& table, Window window, std::size_t group) {
  if (window == Window::Write) {
    const auto c = table.pooled();
    return correlation_from_counts(c.w12, c.w1, c.w2, c.trials);
  }
  const auto c = table.counts(group);
  return correlation_from_counts(c.r12, c.r1, c.r2, c.trials);
}

// --- classical bound -------------------------------------------------------

namespace {

// A density over log(g) sampled on a uniform grid, or a point mass.
struct LogDensity {
  bool point = false;
  double at = 0;  // log of the point mass location
  double origin = 0;
  double step = 0;
  std::vector<double> values;  // unit mass over the grid
  /// Linear-scale density at g = 0; non-zero only without coincidences.
  double at_zero = 0;
  /// E[1/g] under this density.
  double inverse_mean = 0;
};

double trapezoid(const std::vector<double>& v, double step) {
  double s = 0;
  for (std::size_t i = 1; i < v.size(); ++i) s += 0.5 * step * (v[i - 1] + v[i]);
  return s;
}

LogDensity autocorrelation_density(const CorrelationEstimate& e, const BoundGrid& grid) {
  LogDensity d;
  d.origin = std::log(grid.lo);
  d.step = (std::log(grid.hi) - std::log(grid.lo)) / (grid.points - 1);
  if (e.value > 0 && (e.sigma_minus + e.sigma_plus) / e.value < 2 * d.step) {
    d.point = true;
    d.at = std::log(e.value);
    d.inverse_mean = 1 / e.value;
    return d;
  }
  // p = g k with k = P(X) P(Y); weight by dg/du = g.
  const double k = double(e.singles_x) * double(e.singles_y) / (double(e.trials) * double(e.trials));
  const double n = double(e.coincidences), m = double(e.trials - e.coincidences);
  std::vector<double> logs(grid.points);
  double best = -INFINITY;
  for (int i = 0; i < grid.points; ++i) {
    const double u = d.origin + i * d.step;
    const double p = std::exp(u) * k;
    double lp = -INFINITY;
    if (p < 1) lp = (n > 0 ? n * std::log(p) : 0) + m * std::log1p(-p) + u;
    logs[i] = lp;
    best = std::max(best, lp);
  }
  d.values.resize(grid.points);
  for (int i = 0; i < grid.points; ++i) d.values[i] = std::exp(logs[i] - best);
  const double mass = trapezoid(d.values, d.step);
  std::vector<double> weighted(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    d.values[i] /= mass;
    weighted[i] = d.values[i] * std::exp(-(d.origin + i * d.step));
  }
  d.inverse_mean = trapezoid(weighted, d.step);
  // Without coincidences the density in g is k (T+1) (1 - g k)^T.
  if (e.coincidences == 0) d.at_zero = k * (m + 1);
  return d;
}

// Peak of values[i] * exp(-x_i) with parabolic refinement in log space.
double linear_scale_peak(const std::vector<double>& v, double origin, double step,
                         double* peak_log_density = nullptr) {
  std::size_t k = 0;
  double best = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double y = v[i] > 0 ? std::log(v[i]) - (origin + i * step) : -INFINITY;
    if (y > best) {
      best = y;
      k = i;
    }
  }
  double x = origin + k * step;
  if (k > 0 && k + 1 < v.size() && v[k - 1] > 0 && v[k + 1] > 0) {
    const double ym = std::log(v[k - 1]) - (x - step), yp = std::log(v[k + 1]) - (x + step);
    const double curv = ym - 2 * best + yp;
    if (curv < 0) x += 0.5 * step * (ym - yp) / curv;
  }
  if (peak_log_density) *peak_log_density = best;
  return x;
}

double quantile(const std::vector<double>& v, double origin, double step, double q) {
  std::vector<double> cdf(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i) cdf[i] = cdf[i - 1] + 0.5 * step * (v[i - 1] + v[i]);
  const double target = q * cdf.back();
  auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
  if (it == cdf.begin()) return origin;
  if (it == cdf.end()) return origin + (v.size() - 1) * step;
  const std::size_t i = it - cdf.begin();
  const double frac = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
  return origin + (i - 1 + frac) * step;
}

}  // namespace

CorrelationEstimate classical_bound(const CorrelationEstimate& auto_write,
                                    const CorrelationEstimate& auto_read, const BoundGrid& grid) {
  if (auto_write.coincidences == 0 && auto_read.coincidences == 0)
    throw EstimationError("classical_bound: both autocorrelations have zero coincidences");
  if (grid.points < 3 || !(grid.lo > 0) || !(grid.hi > grid.lo))
    throw std::invalid_argument("classical_bound: invalid grid");
  const auto a = autocorrelation_density(auto_write, grid);
  const auto b = autocorrelation_density(auto_read, grid);

  // Density of s = log(g_oo g_mm) on a uniform grid.
  double origin = 0, step = a.step, shift = 0;
  std::vector<double> s;
  if (a.point && b.point) {
    const double value = std::sqrt(auto_write.value * auto_read.value);
    CorrelationEstimate out;
    out.value = value;
    return out;
  } else if (a.point || b.point) {
    const auto& other = a.point ? b : a;
    shift = a.point ? a.at : b.at;
    origin = other.origin;
    s = other.values;
  } else {
    origin = 2 * a.origin;
    s.assign(2 * grid.points - 1, 0.0);
    for (int i = 0; i < grid.points; ++i) {
      if (a.values[i] == 0) continue;
      for (int j = 0; j < grid.points; ++j) s[i + j] += a.values[i] * b.values[j];
    }
  }

  const double mass = trapezoid(s, step);
  for (auto& v : s) v /= mass;

  // ML of the product in linear scale, then the square root.
  double peak_density = 0;
  const double peak = linear_scale_peak(s, origin, step, &peak_density) + shift;
  const double lo = quantile(s, origin, step, kTailMass) + shift;
  const double hi = quantile(s, origin, step, 1 - kTailMass) + shift;
  CorrelationEstimate out;
  out.value = std::exp(0.5 * peak);
  // A side without coincidences puts finite density at a product of zero,
  // which the log grid cannot reach; compare it with the interior peak.
  const double at_zero = a.at_zero * b.inverse_mean + b.at_zero * a.inverse_mean;
  if (at_zero > 0 && std::log(at_zero) >= peak_density - shift) out.value = 0;
  out.sigma_minus = std::max(0.0, out.value - std::exp(0.5 * lo));
  out.sigma_plus = std::max(0.0, std::exp(0.5 * hi) - out.value);
  return out;
}

Verdict cauchy_schwarz_test(const CorrelationEstimate& cross, const CorrelationEstimate& bound) {
  Verdict v;
  v.separation = cross.lower() - bound.upper();
  v.violated = v.separation > 0;
  const double width = cross.sigma_minus + bound.sigma_plus;
  if (width > 0) {
    v.margin = v.separation / width;
  } else {
    v.margin = v.separation > 0 ? INFINITY : (v.separation < 0 ? -INFINITY : 0.0);
  }
  return v;
}

// --- thermometry and heralded state ---------------------------------------

double sideband_occupancy(double rate_red, double rate_blue, double leak_rate) {
  const double red = rate_red - leak_rate, blue = rate_blue - leak_rate;
  if (!(blue - red > 0))
    throw EstimationError("sideband_occupancy: blue rate does not exceed red rate");
  return std::max(0.0, red) / (blue - red);
}

Occupancy sideband_occupancy(std::uint64_t red, std::uint64_t blue, std::uint64_t leak,
                             std::uint64_t trials) {
  const auto r = binomial_ci(red, trials), b = binomial_ci(blue, trials), l = binomial_ci(leak, trials);
  auto raw = [](double rr, double bb, double ll) {
    if (!(bb - rr > 0)) return std::numeric_limits<double>::infinity();
    return (rr - ll) / (bb - rr);
  };
  const double n = raw(r.p_ml, b.p_ml, l.p_ml);
  if (!std::isfinite(n))
    throw EstimationError("sideband_occupancy: blue rate does not exceed red rate");
  // n rises with the red rate and falls with the blue and leak rates.
  const double up[3] = {raw(r.p_ml + r.sigma_plus, b.p_ml, l.p_ml) - n,
                        raw(r.p_ml, b.p_ml - b.sigma_minus, l.p_ml) - n,
                        raw(r.p_ml, b.p_ml, l.p_ml - l.sigma_minus) - n};
  const double down[3] = {n - raw(r.p_ml - r.sigma_minus, b.p_ml, l.p_ml),
                          n - raw(r.p_ml, b.p_ml + b.sigma_plus, l.p_ml),
                          n - raw(r.p_ml, b.p_ml, l.p_ml + l.sigma_plus)};
  Occupancy o;
  o.value = std::max(0.0, n);
  for (int i = 0; i < 3; ++i) {
    o.sigma_plus += up[i] * up[i];
    o.sigma_minus += down[i] * down[i];
  }
  o.sigma_plus = std::max(0.0, std::sqrt(o.sigma_plus) - (o.value - n));
  o.sigma_minus = std::min(o.value, std::sqrt(o.sigma_minus));
  return o;
}

HeraldedAutocorr heralded_autocorr(double g_om) {
  if (!(g_om > 1)) throw EstimationError("heralded_autocorr: g_om must exceed 1");
  return {4.0 / (g_om - 1.0), g_om < 5.0};
}

FockPopulations fock_fidelity(double g_her, double p_false) {
  if (!(g_her >= 0)) throw EstimationError("fock_fidelity: g_her must be >= 0");
  if (!(p_false >= 0 && p_false < 1)) throw EstimationError("fock_fidelity: p_false must lie in [0, 1)");
  FockPopulations f;
  f.p0 = p_false;
  const double rest = 1 - p_false;
  // g/2 p1^2 + p1 - rest = 0, written to stay accurate as g -> 0.
  f.p1 = g_her == 0 ? rest : 2 * rest / (1 + std::sqrt(1 + 2 * g_her * rest));
  f.p_gt1 = 0.5 * g_her * f.p1 * f.p1;
  if (!(f.p1 >= 0 && f.p1 <= 1)) throw EstimationError("fock_fidelity: no physical root");
  return f;
}

}  // namespace phononherald::analysis
