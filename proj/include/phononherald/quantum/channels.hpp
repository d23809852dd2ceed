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

// Unitaries and channels on truncated Fock states.
//
// Both interaction unitaries conserve a number-like quantity (n_A - n_B for
// two-mode squeezing, n_A + n_B for the beam splitter), so the truncated
// generator is block diagonal. It is exponentiated exactly by a Hermitian
// eigendecomposition of each block, which equals the eigendecomposition of the
// full truncated generator.

#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "phononherald/quantum/fock.hpp"

namespace phononherald::quantum {

template <typename Scalar>
using SparseOperator = Eigen::SparseMatrix<Complex<Scalar>>;

template <typename Scalar>
struct GeneratorEntry {
  Eigen::Index row;
  Eigen::Index col;
  Complex<Scalar> value;
};

/// exp(G) for an anti-Hermitian generator given by its non-zero entries.
template <typename Scalar>
SparseOperator<Scalar> exponentiate_generator(Eigen::Index dim,
                                              const std::vector<GeneratorEntry<Scalar>>& entries) {
  std::vector<Eigen::Index> parent(dim);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& e : entries) parent[find(e.row)] = find(e.col);

  std::vector<std::vector<Eigen::Index>> blocks(dim);
  for (Eigen::Index i = 0; i < dim; ++i) blocks[find(i)].push_back(i);
  std::vector<Eigen::Index> slot(dim, -1);

  using Matrix = DensityMatrix<Scalar>;
  std::vector<Matrix> generators(dim);
  for (const auto& b : blocks) {
    if (b.size() < 2) continue;
    for (std::size_t k = 0; k < b.size(); ++k) slot[b[k]] = static_cast<Eigen::Index>(k);
    generators[find(b.front())] = Matrix::Zero(b.size(), b.size());
  }
  for (const auto& e : entries) {
    generators[find(e.row)](slot[e.row], slot[e.col]) += e.value;
  }

  const Complex<Scalar> i_unit(0, 1);
  std::vector<Eigen::Triplet<Complex<Scalar>>> triplets;
  triplets.reserve(entries.size() * 4 + dim);
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    if (b.size() == 1) {
      triplets.emplace_back(b.front(), b.front(), Complex<Scalar>(1));
      continue;
    }
    // K = iG is Hermitian; exp(G) = V exp(-i Lambda) V^dagger.
    const Matrix hermitian = i_unit * generators[find(b.front())];
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
    const auto& lambda = es.eigenvalues();
    Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1> phases(lambda.size());
    for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::exp(-i_unit * lambda(k));
    const Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    for (std::size_t r = 0; r < b.size(); ++r)
      for (std::size_t c = 0; c < b.size(); ++c)
        if (u(r, c) != Complex<Scalar>(0)) triplets.emplace_back(b[r], b[c], u(r, c));
  }
  SparseOperator<Scalar> out(dim, dim);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

/// U rho U^dagger for Hermitian rho, re-Hermitized against round-off.
template <typename Scalar>
TwoModeFockState<Scalar> conjugate(const TwoModeFockState<Scalar>& state,
                                   const SparseOperator<Scalar>& u) {
  using Matrix = typename TwoModeFockState<Scalar>::Matrix;
  const Matrix left = (u * state.rho()).adjoint();
  Matrix out = u * left;
  out = (out + out.adjoint()).eval() * Scalar(0.5);
  return TwoModeFockState<Scalar>(state.n_max(), std::move(out));
}

/// Generator r (e^{i phi} a^dag b^dag - e^{-i phi} a b) on the truncated space.
template <typename Scalar>
std::vector<GeneratorEntry<Scalar>> squeeze_generator(int n_max, Scalar r, Scalar phi) {
  std::vector<GeneratorEntry<Scalar>> g;
  const int l = n_max + 1;
  const Complex<Scalar> up = std::polar(r, phi);
  for (int a = 0; a < n_max; ++a)
    for (int b = 0; b < n_max; ++b) {
      const Scalar amp = std::sqrt(Scalar(a + 1) * Scalar(b + 1));
      const Eigen::Index from = static_cast<Eigen::Index>(a) * l + b;
      const Eigen::Index to = static_cast<Eigen::Index>(a + 1) * l + (b + 1);
      g.push_back({to, from, up * amp});
      g.push_back({from, to, -std::conj(up) * amp});
    }
  return g;
}

/// Generator theta (e^{i phi} a^dag b - e^{-i phi} a b^dag), sin^2 theta = eps.
template <typename Scalar>
std::vector<GeneratorEntry<Scalar>> beam_splitter_generator(int n_max, Scalar theta, Scalar phi) {
  std::vector<GeneratorEntry<Scalar>> g;
  const int l = n_max + 1;
  const Complex<Scalar> hop = std::polar(theta, phi);
  for (int a = 0; a < n_max; ++a)
    for (int b = 1; b <= n_max; ++b) {
      const Scalar amp = std::sqrt(Scalar(a + 1) * Scalar(b));
      const Eigen::Index from = static_cast<Eigen::Index>(a) * l + b;
      const Eigen::Index to = static_cast<Eigen::Index>(a + 1) * l + (b - 1);
      g.push_back({to, from, hop * amp});
      g.push_back({from, to, -std::conj(hop) * amp});
    }
  return g;
}

/// Two-mode squeezing exp[r(e^{i phi} a^dag b^dag - h.c.)]. Mean pair number
/// from vacuum is sinh^2 r.
template <typename Scalar>
TwoModeFockState<Scalar> two_mode_squeeze(const TwoModeFockState<Scalar>& state, Scalar r,
                                          Scalar phi = Scalar(0),
                                          const Tolerances<Scalar>& tol = {}) {
  if (!(r >= Scalar(0))) throw std::invalid_argument("two_mode_squeeze: r must be >= 0");
  require_safe(state, tol, "two_mode_squeeze input");
  if (r == Scalar(0)) return state;
  auto out = conjugate(state, exponentiate_generator<Scalar>(
                                  state.dim(), squeeze_generator(state.n_max(), r, phi)));
  require_safe(out, tol, "two_mode_squeeze");
  return out;
}

/// Beam splitter with a_out = sqrt(1-eps) a + e^{i phi} sqrt(eps) b.
/// eps = 0 is the identity, eps = 1 exchanges the modes.
template <typename Scalar>
TwoModeFockState<Scalar> beam_splitter(const TwoModeFockState<Scalar>& state, Scalar eps,
                                       Scalar phi = Scalar(0),
                                       const Tolerances<Scalar>& tol = {}) {
  if (!(eps >= Scalar(0) && eps <= Scalar(1))) {
    throw std::invalid_argument("beam_splitter: transmittance must lie in [0, 1]");
  }
  require_safe(state, tol, "beam_splitter input");
  if (eps == Scalar(0)) return state;
  const Scalar theta = std::asin(std::sqrt(eps));
  auto out = conjugate(state, exponentiate_generator<Scalar>(
                                  state.dim(), beam_splitter_generator(state.n_max(), theta, phi)));
  require_safe(out, tol, "beam_splitter");
  return out;
}

namespace detail {

/// sqrt(C(n + k, k)) for n + k <= max_total.
template <typename Scalar>
RealMatrix<Scalar> sqrt_binomials(int levels) {
  RealMatrix<Scalar> s = RealMatrix<Scalar>::Zero(levels, levels);
  for (int n = 0; n < levels; ++n)
    for (int k = 0; n + k < levels; ++k) {
      const Scalar log_c = std::lgamma(Scalar(n + k + 1)) - std::lgamma(Scalar(n + 1)) -
                           std::lgamma(Scalar(k + 1));
      s(n, k) = std::exp(Scalar(0.5) * log_c);
    }
  return s;
}

// Applies a single-mode Kraus family sum_k K_k rho K_k^dag whose members
// shift the photon number by -k (loss) or +k (gain). coeff(n, k) is the
// matrix element of K_k between the unshifted and shifted number states.
// index(n, o) maps (number in the target mode, basis label of the rest) to a
// row of rho.
template <typename Scalar, typename Matrix, typename IndexFn>
Matrix apply_shift_kraus(const Matrix& rho, int levels, int other, const RealMatrix<Scalar>& coeff,
                         bool lowers, IndexFn index) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (int n = 0; n < levels; ++n)
    for (int m = 0; m < levels; ++m) {
      const int k_end = levels - std::max(n, m);
      for (int k = 0; k < k_end; ++k) {
        const Scalar w = coeff(n, k) * coeff(m, k);
        if (w == Scalar(0)) continue;
        const int sn = lowers ? n + k : n;
        const int sm = lowers ? m + k : m;
        const int tn = lowers ? n : n + k;
        const int tm = lowers ? m : m + k;
        for (int o = 0; o < other; ++o)
          for (int p = 0; p < other; ++p) out(index(tn, o), index(tm, p)) += w * rho(index(sn, o), index(sm, p));
      }
    }
  return out;
}

// <n| K_k |n+k> for pure loss with transmissivity eta.
template <typename Scalar>
RealMatrix<Scalar> loss_coefficients(int levels, Scalar eta) {
  RealMatrix<Scalar> c = sqrt_binomials<Scalar>(levels);
  for (int n = 0; n < levels; ++n)
    for (int k = 0; n + k < levels; ++k)
      c(n, k) *= std::pow(eta, Scalar(0.5) * n) * std::pow(Scalar(1) - eta, Scalar(0.5) * k);
  return c;
}

// <n+k| A_k |n> for the quantum-limited amplifier of gain G.
template <typename Scalar>
RealMatrix<Scalar> gain_coefficients(int levels, Scalar gain) {
  RealMatrix<Scalar> c = sqrt_binomials<Scalar>(levels);
  const Scalar fill = Scalar(1) - Scalar(1) / gain;
  for (int n = 0; n < levels; ++n)
    for (int k = 0; n + k < levels; ++k)
      c(n, k) *= std::pow(fill, Scalar(0.5) * k) * std::pow(gain, -Scalar(0.5) * (n + 1));
  return c;
}

template <typename Scalar>
TwoModeFockState<Scalar> apply_on_mode(const TwoModeFockState<Scalar>& s, Mode mode,
                                       const RealMatrix<Scalar>& coeff, bool lowers) {
  const int l = s.levels();
  auto index = [l, mode](int n, int o) -> Eigen::Index {
    return mode == Mode::A ? static_cast<Eigen::Index>(n) * l + o
                           : static_cast<Eigen::Index>(o) * l + n;
  };
  auto out = apply_shift_kraus<Scalar>(s.rho(), l, l, coeff, lowers, index);
  return TwoModeFockState<Scalar>(s.n_max(), std::move(out));
}

template <typename Scalar>
ModeState<Scalar> apply_on_mode(const ModeState<Scalar>& s, const RealMatrix<Scalar>& coeff,
                                bool lowers) {
  auto index = [](int n, int) -> Eigen::Index { return n; };
  return ModeState<Scalar>(apply_shift_kraus<Scalar>(s.rho(), s.levels(), 1, coeff, lowers, index));
}

}  // namespace detail

/// Pure-loss channel of transmissivity eta on one mode (coupling to vacuum).
template <typename Scalar>
TwoModeFockState<Scalar> attenuate(const TwoModeFockState<Scalar>& state, Mode mode, Scalar eta,
                                   const Tolerances<Scalar>& tol = {}) {
  if (!(eta >= Scalar(0) && eta <= Scalar(1))) {
    throw std::invalid_argument("attenuate: eta must lie in [0, 1]");
  }
  require_safe(state, tol, "attenuate input");
  if (eta == Scalar(1)) return state;
  return detail::apply_on_mode(state, mode, detail::loss_coefficients(state.levels(), eta), true);
}

template <typename Scalar>
ModeState<Scalar> attenuate(const ModeState<Scalar>& state, Scalar eta,
                            const Tolerances<Scalar>& tol = {}) {
  if (!(eta >= Scalar(0) && eta <= Scalar(1))) {
    throw std::invalid_argument("attenuate: eta must lie in [0, 1]");
  }
  require_safe(state, tol, "attenuate input");
  if (eta == Scalar(1)) return state;
  return detail::apply_on_mode(state, detail::loss_coefficients(state.levels(), eta), true);
}

/// Quantum-limited phase-insensitive amplifier, n -> G n + (G - 1).
template <typename Scalar>
ModeState<Scalar> amplify(const ModeState<Scalar>& state, Scalar gain,
                          const Tolerances<Scalar>& tol = {}) {
  if (!(gain >= Scalar(1))) throw std::invalid_argument("amplify: gain must be >= 1");
  if (gain == Scalar(1)) return state;
  auto out = detail::apply_on_mode(state, detail::gain_coefficients(state.levels(), gain), false);
  require_safe(out, tol, "amplify");
  return out;
}

template <typename Scalar>
TwoModeFockState<Scalar> amplify(const TwoModeFockState<Scalar>& state, Mode mode, Scalar gain,
                                 const Tolerances<Scalar>& tol = {}) {
  if (!(gain >= Scalar(1))) throw std::invalid_argument("amplify: gain must be >= 1");
  if (gain == Scalar(1)) return state;
  auto out =
      detail::apply_on_mode(state, mode, detail::gain_coefficients(state.levels(), gain), false);
  require_safe(out, tol, "amplify");
  return out;
}

/// Additive thermal noise: every mean occupation grows by n_add while
/// existing excitations survive with unit weight. Realized as loss 1/G
/// followed by gain G with G = 1 + n_add.
template <typename Scalar>
ModeState<Scalar> add_thermal_noise(const ModeState<Scalar>& state, Scalar n_add,
                                    const Tolerances<Scalar>& tol = {}) {
  if (!(n_add >= Scalar(0))) throw std::invalid_argument("add_thermal_noise: n_add must be >= 0");
  if (n_add == Scalar(0)) return state;
  const Scalar gain = Scalar(1) + n_add;
  return amplify(attenuate(state, Scalar(1) / gain, tol), gain, tol);
}

template <typename Scalar>
TwoModeFockState<Scalar> add_thermal_noise(const TwoModeFockState<Scalar>& state, Mode mode,
                                           Scalar n_add, const Tolerances<Scalar>& tol = {}) {
  if (!(n_add >= Scalar(0))) throw std::invalid_argument("add_thermal_noise: n_add must be >= 0");
  if (n_add == Scalar(0)) return state;
  const Scalar gain = Scalar(1) + n_add;
  return amplify(attenuate(state, mode, Scalar(1) / gain, tol), mode, gain, tol);
}

/// Reduced state of the optical output port when `state` is swapped with
/// transfer efficiency eps onto a mode that starts in vacuum. This is the B
/// marginal of beam_splitter(state (x) |0><0|, eps), computed without building
/// the two-mode operator.
template <typename Scalar>
ModeState<Scalar> transfer_to_vacuum_mode(const ModeState<Scalar>& state, Scalar eps,
                                          const Tolerances<Scalar>& tol = {}) {
  return attenuate(state, eps, tol);
}

}  // namespace phononherald::quantum
