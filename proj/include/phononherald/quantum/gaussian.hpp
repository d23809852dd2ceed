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

// Zero-mean two-mode Gaussian states as 4x4 covariance matrices in
// (x_A, p_A, x_B, p_B) ordering with vacuum = identity / 2, plus a small
// circuit description that can be run through either this representation or
// the truncated Fock engine.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <variant>
#include <vector>

#include "phononherald/quantum/channels.hpp"
#include "phononherald/quantum/detection.hpp"
#include "phononherald/quantum/fock.hpp"
#include "phononherald/quantum/observables.hpp"

namespace phononherald::quantum {

template <typename Scalar = double>
class CovarianceState {
 public:
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

  CovarianceState() : cov_(Matrix4::Identity() * Scalar(0.5)) {}
  explicit CovarianceState(const Matrix4& cov) : cov_(cov) {}

  static CovarianceState vacuum() { return CovarianceState(); }

  static CovarianceState thermal(Scalar n_a, Scalar n_b) {
    Matrix4 cov = Matrix4::Zero();
    cov(0, 0) = cov(1, 1) = n_a + Scalar(0.5);
    cov(2, 2) = cov(3, 3) = n_b + Scalar(0.5);
    return CovarianceState(cov);
  }

  const Matrix4& cov() const { return cov_; }

  /// Symmetry and the uncertainty relation cov + (i/2) Omega >= 0.
  bool is_physical(Scalar symmetry_tol = Scalar(1e-12), Scalar eig_tol = Scalar(1e-10)) const {
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > symmetry_tol) return false;
    using CMatrix4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;
    CMatrix4 m = cov_.template cast<Complex<Scalar>>();
    const Complex<Scalar> half_i(0, Scalar(0.5));
    for (int k = 0; k < 2; ++k) {
      m(2 * k, 2 * k + 1) += half_i;
      m(2 * k + 1, 2 * k) -= half_i;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix4> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eig_tol;
  }

 private:
  Matrix4 cov_;
};

namespace detail {

// Symplectic matrix of the Bogoliubov map a_j -> sum_k u_jk a_k + v_jk a_k^dag.
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> bogoliubov_symplectic(const Eigen::Matrix<Complex<Scalar>, 2, 2>& u,
                                                  const Eigen::Matrix<Complex<Scalar>, 2, 2>& v) {
  Eigen::Matrix<Scalar, 4, 4> s;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const Scalar ur = u(j, k).real(), ui = u(j, k).imag();
      const Scalar vr = v(j, k).real(), vi = v(j, k).imag();
      s(2 * j, 2 * k) = ur + vr;
      s(2 * j, 2 * k + 1) = vi - ui;
      s(2 * j + 1, 2 * k) = ui + vi;
      s(2 * j + 1, 2 * k + 1) = ur - vr;
    }
  return s;
}

}  // namespace detail

template <typename Scalar>
CovarianceState<Scalar> two_mode_squeeze(const CovarianceState<Scalar>& s, Scalar r,
                                         Scalar phi = Scalar(0)) {
  Eigen::Matrix<Complex<Scalar>, 2, 2> u = Eigen::Matrix<Complex<Scalar>, 2, 2>::Zero();
  Eigen::Matrix<Complex<Scalar>, 2, 2> v = Eigen::Matrix<Complex<Scalar>, 2, 2>::Zero();
  u(0, 0) = u(1, 1) = std::cosh(r);
  v(0, 1) = v(1, 0) = std::polar(std::sinh(r), phi);
  const auto sym = detail::bogoliubov_symplectic(u, v);
  return CovarianceState<Scalar>(sym * s.cov() * sym.transpose());
}

template <typename Scalar>
CovarianceState<Scalar> beam_splitter(const CovarianceState<Scalar>& s, Scalar eps,
                                      Scalar phi = Scalar(0)) {
  Eigen::Matrix<Complex<Scalar>, 2, 2> u;
  const Scalar t = std::sqrt(Scalar(1) - eps), r = std::sqrt(eps);
  u(0, 0) = t;
  u(0, 1) = std::polar(r, phi);
  u(1, 0) = -std::polar(r, -phi);
  u(1, 1) = t;
  const auto sym =
      detail::bogoliubov_symplectic(u, Eigen::Matrix<Complex<Scalar>, 2, 2>::Zero().eval());
  return CovarianceState<Scalar>(sym * s.cov() * sym.transpose());
}

template <typename Scalar>
CovarianceState<Scalar> attenuate(const CovarianceState<Scalar>& s, Mode mode, Scalar eta) {
  auto cov = s.cov();
  const int k = 2 * static_cast<int>(mode);
  const Scalar root = std::sqrt(eta);
  cov.row(k) *= root;
  cov.row(k + 1) *= root;
  cov.col(k) *= root;
  cov.col(k + 1) *= root;
  cov(k, k) += (Scalar(1) - eta) * Scalar(0.5);
  cov(k + 1, k + 1) += (Scalar(1) - eta) * Scalar(0.5);
  return CovarianceState<Scalar>(cov);
}

template <typename Scalar>
CovarianceState<Scalar> add_thermal_noise(const CovarianceState<Scalar>& s, Mode mode,
                                          Scalar n_add) {
  auto cov = s.cov();
  const int k = 2 * static_cast<int>(mode);
  cov(k, k) += n_add;
  cov(k + 1, k + 1) += n_add;
  return CovarianceState<Scalar>(cov);
}

template <typename Scalar>
Scalar mean_occupation(const CovarianceState<Scalar>& s, Mode mode) {
  const int k = 2 * static_cast<int>(mode);
  return Scalar(0.5) * (s.cov()(k, k) + s.cov()(k + 1, k + 1)) - Scalar(0.5);
}

/// Probability that the selected modes are all in vacuum,
/// 1 / sqrt(det(cov_sel + I/2)).
template <typename Scalar>
Scalar vacuum_probability(const CovarianceState<Scalar>& s, bool mode_a, bool mode_b) {
  std::vector<int> idx;
  if (mode_a) idx.insert(idx.end(), {0, 1});
  if (mode_b) idx.insert(idx.end(), {2, 3});
  if (idx.empty()) return Scalar(1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = s.cov()(idx[i], idx[j]);
  m.diagonal().array() += Scalar(0.5);
  return Scalar(1) / std::sqrt(m.determinant());
}

template <typename Scalar = double>
struct GaussianClickStats {
  Scalar mean_a = 0;
  Scalar mean_b = 0;
  Scalar vacuum_a = 1;
  Scalar vacuum_b = 1;
  Scalar vacuum_ab = 1;
  /// Ideal threshold detectors (no dark counts or leakage) on each mode.
  ClickTable<Scalar> clicks;
};

/// Click statistics after per-mode detection efficiencies eta_a, eta_b.
template <typename Scalar>
GaussianClickStats<Scalar> gaussian_click_stats(const CovarianceState<Scalar>& s, Scalar eta_a,
                                                Scalar eta_b) {
  const auto measured = attenuate(attenuate(s, Mode::A, eta_a), Mode::B, eta_b);
  GaussianClickStats<Scalar> out;
  out.mean_a = mean_occupation(measured, Mode::A);
  out.mean_b = mean_occupation(measured, Mode::B);
  out.vacuum_a = vacuum_probability(measured, true, false);
  out.vacuum_b = vacuum_probability(measured, false, true);
  out.vacuum_ab = vacuum_probability(measured, true, true);
  out.clicks.p[0] = out.vacuum_ab;
  out.clicks.p[1] = out.vacuum_b - out.vacuum_ab;
  out.clicks.p[2] = out.vacuum_a - out.vacuum_ab;
  out.clicks.p[3] = Scalar(1) - out.vacuum_a - out.vacuum_b + out.vacuum_ab;
  return out;
}

// --- circuits --------------------------------------------------------------

namespace op {

template <typename Scalar = double>
struct Thermal {
  Scalar n_bar;
};
struct Fock {
  int n;
};
template <typename Scalar = double>
struct Squeeze {
  Scalar r;
  Scalar phi = 0;
};
template <typename Scalar = double>
struct BeamSplit {
  Scalar eps;
  Scalar phi = 0;
};
template <typename Scalar = double>
struct Loss {
  Mode mode;
  Scalar eta;
};
template <typename Scalar = double>
struct Noise {
  Mode mode;
  Scalar n_add;
};

}  // namespace op

template <typename Scalar = double>
using ModePreparation = std::variant<op::Thermal<Scalar>, op::Fock>;

template <typename Scalar = double>
using CircuitOp =
    std::variant<op::Squeeze<Scalar>, op::BeamSplit<Scalar>, op::Loss<Scalar>, op::Noise<Scalar>>;

/// Product-state preparation followed by a sequence of operations.
template <typename Scalar = double>
struct Circuit {
  ModePreparation<Scalar> mode_a = op::Thermal<Scalar>{0};
  ModePreparation<Scalar> mode_b = op::Thermal<Scalar>{0};
  std::vector<CircuitOp<Scalar>> ops;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Runs the circuit through the covariance representation. Throws
/// NonGaussianError for Fock preparations other than vacuum.
template <typename Scalar>
CovarianceState<Scalar> to_covariance(const Circuit<Scalar>& circuit) {
  auto occupation = [](const ModePreparation<Scalar>& prep) {
    return std::visit(Overloaded{[](const op::Thermal<Scalar>& t) { return t.n_bar; },
                                 [](const op::Fock& f) -> Scalar {
                                   if (f.n != 0)
                                     throw NonGaussianError(
                                         "to_covariance: Fock state |" + std::to_string(f.n) +
                                         "> is not Gaussian");
                                   return Scalar(0);
                                 }},
                      prep);
  };
  auto s = CovarianceState<Scalar>::thermal(occupation(circuit.mode_a), occupation(circuit.mode_b));
  for (const auto& step : circuit.ops) {
    s = std::visit(
        Overloaded{[&](const op::Squeeze<Scalar>& o) { return two_mode_squeeze(s, o.r, o.phi); },
                   [&](const op::BeamSplit<Scalar>& o) { return beam_splitter(s, o.eps, o.phi); },
                   [&](const op::Loss<Scalar>& o) { return attenuate(s, o.mode, o.eta); },
                   [&](const op::Noise<Scalar>& o) { return add_thermal_noise(s, o.mode, o.n_add); }},
        step);
  }
  return s;
}

/// Runs the same circuit through the truncated Fock engine.
template <typename Scalar>
TwoModeFockState<Scalar> to_fock(const Circuit<Scalar>& circuit, int n_max,
                                 const Tolerances<Scalar>& tol = {}) {
  auto prepare = [&](const ModePreparation<Scalar>& prep) {
    return std::visit(Overloaded{[&](const op::Thermal<Scalar>& t) {
                                   return thermal_state<Scalar>(t.n_bar, n_max, tol);
                                 },
                                 [&](const op::Fock& f) { return fock_state<Scalar>(f.n, n_max); }},
                      prep);
  };
  auto s = tensor(prepare(circuit.mode_a), prepare(circuit.mode_b));
  for (const auto& step : circuit.ops) {
    s = std::visit(
        Overloaded{
            [&](const op::Squeeze<Scalar>& o) { return two_mode_squeeze(s, o.r, o.phi, tol); },
            [&](const op::BeamSplit<Scalar>& o) { return beam_splitter(s, o.eps, o.phi, tol); },
            [&](const op::Loss<Scalar>& o) { return attenuate(s, o.mode, o.eta, tol); },
            [&](const op::Noise<Scalar>& o) { return add_thermal_noise(s, o.mode, o.n_add, tol); }},
        step);
  }
  return s;
}

}  // namespace phononherald::quantum
