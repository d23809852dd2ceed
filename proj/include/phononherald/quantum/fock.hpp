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

// Truncated Fock-space density operators for one and two bosonic modes.
//
// Two-mode operators live in the tensor basis |n_A> (x) |n_B> with mode A
// listed first, i.e. the basis index of |n_A, n_B> is n_A * (n_max + 1) + n_B.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <complex>
#include <string>

#include "phononherald/errors.hpp"

namespace phononherald::quantum {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using DensityMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

enum class Mode { A = 0, B = 1 };

inline Mode other(Mode m) { return m == Mode::A ? Mode::B : Mode::A; }

template <typename Scalar = double>
struct Tolerances {
  Scalar trace = Scalar(1e-9);
  Scalar hermiticity = Scalar(1e-12);
  Scalar positivity = Scalar(1e-10);
  /// Largest population allowed in the top Fock level of either mode.
  Scalar leak = Scalar(1e-8);
};

inline constexpr int kDefaultCutoff = 8;

/// Single-mode density operator on |0>..|n_max>.
template <typename Scalar = double>
class ModeState {
 public:
  using Matrix = DensityMatrix<Scalar>;

  explicit ModeState(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
      throw std::invalid_argument("ModeState: density matrix must be square and non-empty");
    }
  }

  static ModeState vacuum(int n_max) {
    Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
    rho(0, 0) = Scalar(1);
    return ModeState(std::move(rho));
  }

  int n_max() const { return static_cast<int>(rho_.rows()) - 1; }
  int levels() const { return static_cast<int>(rho_.rows()); }
  const Matrix& rho() const { return rho_; }

  RealVector<Scalar> populations() const { return rho_.diagonal().real(); }
  Scalar trace() const { return rho_.trace().real(); }
  Scalar top_population() const { return rho_(n_max(), n_max()).real(); }

  /// Zero-padded (or cut) copy with a different cutoff.
  ModeState with_cutoff(int n_max) const {
    Matrix out = Matrix::Zero(n_max + 1, n_max + 1);
    const int keep = std::min(levels(), n_max + 1);
    out.topLeftCorner(keep, keep) = rho_.topLeftCorner(keep, keep);
    return ModeState(std::move(out));
  }

  ModeState normalized() const {
    const Scalar t = trace();
    if (!(t > Scalar(0))) throw std::domain_error("ModeState: cannot normalize a zero-trace operator");
    return ModeState(rho_ / t);
  }

 private:
  Matrix rho_;
};

/// Density operator of a mode pair truncated at n_max quanta per mode.
template <typename Scalar = double>
class TwoModeFockState {
 public:
  using Matrix = DensityMatrix<Scalar>;

  TwoModeFockState(int n_max, Matrix rho) : n_max_(n_max), rho_(std::move(rho)) {
    const Eigen::Index d = static_cast<Eigen::Index>(n_max + 1) * (n_max + 1);
    if (n_max < 0 || rho_.rows() != d || rho_.cols() != d) {
      throw std::invalid_argument("TwoModeFockState: matrix dimension must be (n_max+1)^2");
    }
  }

  static TwoModeFockState vacuum(int n_max = kDefaultCutoff) {
    const int d = (n_max + 1) * (n_max + 1);
    Matrix rho = Matrix::Zero(d, d);
    rho(0, 0) = Scalar(1);
    return TwoModeFockState(n_max, std::move(rho));
  }

  int n_max() const { return n_max_; }
  int levels() const { return n_max_ + 1; }
  int dim() const { return levels() * levels(); }
  Eigen::Index index(int n_a, int n_b) const {
    return static_cast<Eigen::Index>(n_a) * levels() + n_b;
  }
  const Matrix& rho() const { return rho_; }
  Scalar trace() const { return rho_.trace().real(); }

  /// Joint number distribution P(n_A, n_B), rows indexed by n_A.
  RealMatrix<Scalar> joint_populations() const {
    RealMatrix<Scalar> p(levels(), levels());
    for (int a = 0; a < levels(); ++a)
      for (int b = 0; b < levels(); ++b) p(a, b) = rho_(index(a, b), index(a, b)).real();
    return p;
  }

  /// Reduced state of one mode.
  ModeState<Scalar> marginal(Mode mode) const {
    typename ModeState<Scalar>::Matrix out =
        ModeState<Scalar>::Matrix::Zero(levels(), levels());
    for (int n = 0; n < levels(); ++n)
      for (int m = 0; m < levels(); ++m)
        for (int o = 0; o < levels(); ++o) {
          out(n, m) += mode == Mode::A ? rho_(index(n, o), index(m, o))
                                       : rho_(index(o, n), index(o, m));
        }
    return ModeState<Scalar>(std::move(out));
  }

  Scalar top_population(Mode mode) const {
    Scalar p = 0;
    for (int o = 0; o < levels(); ++o) {
      const auto i = mode == Mode::A ? index(n_max_, o) : index(o, n_max_);
      p += rho_(i, i).real();
    }
    return p;
  }

  bool truncation_safe(Scalar leak_tol = Tolerances<Scalar>{}.leak) const {
    return top_population(Mode::A) <= leak_tol && top_population(Mode::B) <= leak_tol;
  }

 private:
  int n_max_;
  Matrix rho_;
};

/// Result of a full invariant audit. `ok()` is the conjunction of all checks.
template <typename Scalar = double>
struct InvariantReport {
  Scalar trace_error = 0;
  Scalar hermiticity_error = 0;
  Scalar min_eigenvalue = 0;
  Scalar top_population = 0;
  bool trace_ok = true;
  bool hermitian = true;
  bool positive = true;
  bool truncation_safe = true;
  bool ok() const { return trace_ok && hermitian && positive && truncation_safe; }
};

template <typename Scalar, typename Matrix>
InvariantReport<Scalar> audit_matrix(const Matrix& rho, Scalar top, const Tolerances<Scalar>& tol) {
  InvariantReport<Scalar> r;
  r.trace_error = std::abs(rho.trace().real() - Scalar(1));
  r.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues().minCoeff();
  r.top_population = top;
  r.trace_ok = r.trace_error <= tol.trace;
  r.hermitian = r.hermiticity_error <= tol.hermiticity;
  r.positive = r.min_eigenvalue >= -tol.positivity;
  r.truncation_safe = top <= tol.leak;
  return r;
}

template <typename Scalar>
InvariantReport<Scalar> audit(const TwoModeFockState<Scalar>& s,
                              const Tolerances<Scalar>& tol = {}) {
  return audit_matrix(s.rho(), std::max(s.top_population(Mode::A), s.top_population(Mode::B)),
                      tol);
}

template <typename Scalar>
InvariantReport<Scalar> audit(const ModeState<Scalar>& s, const Tolerances<Scalar>& tol = {}) {
  return audit_matrix(s.rho(), s.top_population(), tol);
}

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

template <typename Scalar>
void require_safe(Scalar top, Scalar trace, const Tolerances<Scalar>& tol, const char* where) {
  if (top > tol.leak) {
    throw TruncationError(std::string(where) + ": top Fock level holds population " +
                          sci(static_cast<double>(top)) + " > leak tolerance");
  }
  if (std::abs(trace - Scalar(1)) > tol.trace) {
    throw TruncationError(std::string(where) + ": trace drifted to " +
                          std::to_string(static_cast<double>(trace)));
  }
}

}  // namespace detail

template <typename Scalar>
void require_safe(const TwoModeFockState<Scalar>& s, const Tolerances<Scalar>& tol = {},
                  const char* where = "state") {
  detail::require_safe(std::max(s.top_population(Mode::A), s.top_population(Mode::B)), s.trace(),
                       tol, where);
}

template <typename Scalar>
void require_safe(const ModeState<Scalar>& s, const Tolerances<Scalar>& tol = {},
                  const char* where = "state") {
  detail::require_safe(s.top_population(), s.trace(), tol, where);
}

/// Geometric (Bose-Einstein) state with mean occupation n_bar, renormalized
/// over the truncated space. Throws TruncationError if the top level would
/// hold more than the leak tolerance.
template <typename Scalar = double>
ModeState<Scalar> thermal_state(Scalar n_bar, int n_max = kDefaultCutoff,
                                const Tolerances<Scalar>& tol = {}) {
  if (!(n_bar >= Scalar(0))) throw std::invalid_argument("thermal_state: n_bar must be >= 0");
  if (n_max < 0) throw std::invalid_argument("thermal_state: n_max must be >= 0");
  using Matrix = typename ModeState<Scalar>::Matrix;
  Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
  if (n_bar == Scalar(0)) {
    rho(0, 0) = Scalar(1);
    return ModeState<Scalar>(std::move(rho));
  }
  const Scalar ratio = n_bar / (Scalar(1) + n_bar);
  Scalar w = Scalar(1) / (Scalar(1) + n_bar);
  Scalar total = 0;
  for (int n = 0; n <= n_max; ++n) {
    rho(n, n) = w;
    total += w;
    w *= ratio;
  }
  rho /= total;
  ModeState<Scalar> out(std::move(rho));
  if (out.top_population() > tol.leak) {
    throw TruncationError("thermal_state: n_bar=" + std::to_string(static_cast<double>(n_bar)) +
                          " is too large for n_max=" + std::to_string(n_max));
  }
  return out;
}

/// Projector onto |n>.
template <typename Scalar = double>
ModeState<Scalar> fock_state(int n, int n_max = kDefaultCutoff) {
  if (n < 0 || n > n_max) {
    throw std::out_of_range("fock_state: n=" + std::to_string(n) + " outside [0, " +
                            std::to_string(n_max) + "]");
  }
  using Matrix = typename ModeState<Scalar>::Matrix;
  Matrix rho = Matrix::Zero(n_max + 1, n_max + 1);
  rho(n, n) = Scalar(1);
  return ModeState<Scalar>(std::move(rho));
}

/// rho_A (x) rho_B. Both factors are padded to the larger cutoff.
template <typename Scalar>
TwoModeFockState<Scalar> tensor(const ModeState<Scalar>& a, const ModeState<Scalar>& b) {
  const int n_max = std::max(a.n_max(), b.n_max());
  const auto pa = a.with_cutoff(n_max);
  const auto pb = b.with_cutoff(n_max);
  using Matrix = typename TwoModeFockState<Scalar>::Matrix;
  const int l = n_max + 1;
  Matrix rho(l * l, l * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) rho.block(i * l, j * l, l, l) = pa.rho()(i, j) * pb.rho();
  return TwoModeFockState<Scalar>(n_max, std::move(rho));
}

template <typename Scalar>
TwoModeFockState<Scalar> tensor_with_vacuum(const ModeState<Scalar>& a) {
  return tensor(a, ModeState<Scalar>::vacuum(a.n_max()));
}

/// Smallest cutoff whose top level would hold less than `tail` population for
/// a thermal distribution of mean `mean_occupation`. Never below `floor`.
template <typename Scalar>
int cutoff_for_occupation(Scalar mean_occupation, Scalar tail, int floor = kDefaultCutoff) {
  if (mean_occupation <= Scalar(0)) return floor;
  const Scalar ratio = mean_occupation / (Scalar(1) + mean_occupation);
  const int n = static_cast<int>(std::ceil(std::log(tail) / std::log(ratio)));
  return std::max(floor, n);
}

}  // namespace phononherald::quantum
