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

// Threshold (click / no-click) detection with finite efficiency, dark counts
// and Poissonian pump leakage. Background clicks are independent of the
// signal mode.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "phononherald/quantum/fock.hpp"

namespace phononherald::quantum {

template <typename Scalar = double>
struct DetectorModel {
  /// Probability that a photon of the measured mode produces a click.
  Scalar efficiency = 1;
  /// Probability of a dark count inside the evaluation window.
  Scalar dark_prob = 0;
  /// Mean number of leaked pump photons in the measured mode per pulse.
  Scalar leak_mean = 0;

  void validate() const {
    if (!(efficiency >= 0 && efficiency <= 1))
      throw std::invalid_argument("DetectorModel: efficiency outside [0, 1]");
    if (!(dark_prob >= 0 && dark_prob < 1))
      throw std::invalid_argument("DetectorModel: dark_prob outside [0, 1)");
    if (!(leak_mean >= 0)) throw std::invalid_argument("DetectorModel: leak_mean negative");
  }

  /// Probability that neither a dark count nor a leaked photon fires.
  Scalar background_silence() const {
    return (Scalar(1) - dark_prob) * std::exp(-efficiency * leak_mean);
  }
};

/// Joint click probabilities of two detectors, indexed by a 2-bit pattern:
/// bit 0 set when the first detector clicks, bit 1 when the second does.
template <typename Scalar = double>
struct ClickTable {
  std::array<Scalar, 4> p{};

  Scalar operator()(bool first, bool second) const {
    return p[(first ? 1 : 0) | (second ? 2 : 0)];
  }
  Scalar first_clicks() const { return p[1] + p[3]; }
  Scalar second_clicks() const { return p[2] + p[3]; }
  Scalar any_click() const { return Scalar(1) - p[0]; }
  Scalar sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

namespace detail {

// P(pattern | n photons) for one mode feeding two detectors, where each photon
// independently reaches the first detector with probability eta1, the second
// with eta2, or is lost.
template <typename Scalar>
std::array<RealVector<Scalar>, 4> split_povm(int levels, const DetectorModel<Scalar>& d1,
                                             const DetectorModel<Scalar>& d2) {
  d1.validate();
  d2.validate();
  if (d1.efficiency + d2.efficiency > Scalar(1) + Scalar(1e-15)) {
    throw std::invalid_argument("split detection: efficiencies sum above 1");
  }
  const Scalar b1 = d1.background_silence();
  const Scalar b2 = d2.background_silence();
  const Scalar lost = std::max(Scalar(0), Scalar(1) - d1.efficiency - d2.efficiency);
  std::array<RealVector<Scalar>, 4> f;
  for (auto& v : f) v.resize(levels);
  for (int n = 0; n < levels; ++n) {
    const Scalar none = std::pow(lost, Scalar(n)) * b1 * b2;
    const Scalar first_silent = std::pow(Scalar(1) - d1.efficiency, Scalar(n)) * b1;
    const Scalar second_silent = std::pow(Scalar(1) - d2.efficiency, Scalar(n)) * b2;
    f[0](n) = none;
    f[1](n) = second_silent - none;
    f[2](n) = first_silent - none;
    f[3](n) = Scalar(1) - first_silent - second_silent + none;
  }
  return f;
}

template <typename Scalar>
RealVector<Scalar> single_silence(int levels, const DetectorModel<Scalar>& d) {
  d.validate();
  RealVector<Scalar> q(levels);
  const Scalar b = d.background_silence();
  for (int n = 0; n < levels; ++n) q(n) = std::pow(Scalar(1) - d.efficiency, Scalar(n)) * b;
  return q;
}

}  // namespace detail

/// One detector per mode: first = mode A, second = mode B.
template <typename Scalar>
ClickTable<Scalar> click_probabilities(const TwoModeFockState<Scalar>& state,
                                       const DetectorModel<Scalar>& det_a,
                                       const DetectorModel<Scalar>& det_b) {
  const auto joint = state.joint_populations();
  const auto qa = detail::single_silence(state.levels(), det_a);
  const auto qb = detail::single_silence(state.levels(), det_b);
  ClickTable<Scalar> t;
  for (int a = 0; a < state.levels(); ++a)
    for (int b = 0; b < state.levels(); ++b) {
      const Scalar w = joint(a, b);
      t.p[0] += w * qa(a) * qb(b);
      t.p[1] += w * (1 - qa(a)) * qb(b);
      t.p[2] += w * qa(a) * (1 - qb(b));
      t.p[3] += w * (1 - qa(a)) * (1 - qb(b));
    }
  return t;
}

/// A single mode split onto two detectors (Hanbury Brown-Twiss arrangement).
template <typename Scalar>
ClickTable<Scalar> split_click_probabilities(const ModeState<Scalar>& state,
                                             const DetectorModel<Scalar>& first,
                                             const DetectorModel<Scalar>& second) {
  const auto f = detail::split_povm(state.levels(), first, second);
  const auto p = state.populations();
  ClickTable<Scalar> t;
  for (int k = 0; k < 4; ++k) t.p[k] = p.dot(f[k]);
  return t;
}

/// Outcome of measuring one mode of a pair: probability and normalized state
/// of the unmeasured mode given that click pattern.
template <typename Scalar>
struct Herald {
  Scalar probability = 0;
  ModeState<Scalar> state = ModeState<Scalar>::vacuum(0);
};

/// Measures `measured` with two detectors in the split arrangement and returns,
/// for each of the four click patterns, the conditional state of the other mode.
template <typename Scalar>
std::array<Herald<Scalar>, 4> split_detection(const TwoModeFockState<Scalar>& state, Mode measured,
                                              const DetectorModel<Scalar>& first,
                                              const DetectorModel<Scalar>& second) {
  const auto f = detail::split_povm(state.levels(), first, second);
  const int l = state.levels();
  using Matrix = typename ModeState<Scalar>::Matrix;
  std::array<Matrix, 4> conditional;
  for (auto& c : conditional) c = Matrix::Zero(l, l);
  for (int n = 0; n < l; ++n)
    for (int m = 0; m < l; ++m)
      for (int o = 0; o < l; ++o) {
        const auto value = measured == Mode::B ? state.rho()(state.index(n, o), state.index(m, o))
                                               : state.rho()(state.index(o, n), state.index(o, m));
        for (int k = 0; k < 4; ++k) conditional[k](n, m) += f[k](o) * value;
      }
  std::array<Herald<Scalar>, 4> out{
      Herald<Scalar>{0, ModeState<Scalar>::vacuum(state.n_max())},
      Herald<Scalar>{0, ModeState<Scalar>::vacuum(state.n_max())},
      Herald<Scalar>{0, ModeState<Scalar>::vacuum(state.n_max())},
      Herald<Scalar>{0, ModeState<Scalar>::vacuum(state.n_max())}};
  for (int k = 0; k < 4; ++k) {
    const Scalar prob = std::max(Scalar(0), conditional[k].trace().real());
    out[k].probability = prob;
    if (prob > Scalar(0)) out[k].state = ModeState<Scalar>(conditional[k] / prob);
  }
  return out;
}

}  // namespace phononherald::quantum
