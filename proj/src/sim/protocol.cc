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


#include "phononherald/sim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "phononherald/quantum/channels.hpp"
#include "phononherald/quantum/observables.hpp"
#include "phononherald/sim/rng.hpp"

namespace phononherald::sim {

using quantum::DetectorModel;
using quantum::Mode;
using quantum::ModeState;
using quantum::TwoModeFockState;

double heating_occupation(double delta_t_ns, const HeatingParams& h) {
  const double t_us = delta_t_ns * 1e-3;
  return h.n_base + h.a_heat * -std::expm1(-t_us / h.tau_rise_us) * std::exp(-t_us / h.t_decay_us);
}

// --- outcome table queries -------------------------------------------------

double OutcomeTable::sum() const {
  double s = 0;
  for (double v : p) s += v;
  return s;
}

double OutcomeTable::probability(unsigned mask, unsigned value) const {
  double s = 0;
  for (unsigned k = 0; k < 16; ++k)
    if ((k & mask) == value) s += p[k];
  return s;
}

double OutcomeTable::write_click(int d) const {
  const unsigned bit = d == 0 ? kW1 : kW2;
  return probability(bit, bit);
}

double OutcomeTable::read_click(int d) const {
  const unsigned bit = d == 0 ? kR1 : kR2;
  return probability(bit, bit);
}

double OutcomeTable::any_write() const { return 1 - probability(kW1 | kW2, 0); }
double OutcomeTable::any_read() const { return 1 - probability(kR1 | kR2, 0); }
double OutcomeTable::write_coincidence() const { return probability(kW1 | kW2, kW1 | kW2); }
double OutcomeTable::read_coincidence() const { return probability(kR1 | kR2, kR1 | kR2); }

double OutcomeTable::write_and_read() const {
  double s = 0;
  for (unsigned k = 0; k < 16; ++k)
    if ((k & (kW1 | kW2)) && (k & (kR1 | kR2))) s += p[k];
  return s;
}

double OutcomeTable::g2_cross() const { return write_and_read() / (any_write() * any_read()); }

double OutcomeTable::g2_cross_offset() const {
  // Independent trials: the joint probability factorizes by construction.
  const double joint = any_write() * any_read();
  return joint / (any_write() * any_read());
}

double OutcomeTable::g2_write_auto() const {
  return write_coincidence() / (write_click(0) * write_click(1));
}

double OutcomeTable::g2_read_auto() const {
  return read_coincidence() / (read_click(0) * read_click(1));
}

double OutcomeTable::classical_bound() const { return std::sqrt(g2_write_auto() * g2_read_auto()); }

double OutcomeTable::heralded_read_g2() const {
  double both = 0, first = 0, second = 0;
  for (unsigned k = 0; k < 16; ++k) {
    if (!(k & (kW1 | kW2))) continue;
    if (k & kR1) first += p[k];
    if (k & kR2) second += p[k];
    if ((k & kR1) && (k & kR2)) both += p[k];
  }
  return both * any_write() / (first * second);
}

// --- table construction ----------------------------------------------------

DetectorSet detectors(const ExperimentConfig& c) {
  DetectorSet d;
  const double leak_w = c.leak_photons(c.protocol.write_energy_fj);
  const double leak_r = c.leak_photons(c.protocol.read_energy_fj);
  for (int i = 0; i < 2; ++i) {
    d.write[i] = {c.detector_efficiency(i), c.dark_probability(c.chain.window_write_ns), leak_w};
    d.read[i] = {c.detector_efficiency(i), c.dark_probability(c.chain.window_read_ns), leak_r};
  }
  return d;
}

namespace {

constexpr double kCutoffTail = 1e-13;

double pair_squeezing(double p_pair) { return std::asinh(std::sqrt(p_pair)); }

}  // namespace

HeraldStage prepare_heralds(const ExperimentConfig& c) {
  c.validate();
  const double n_base = c.heating.n_base;
  const double p = c.protocol.p_pair;
  // Mechanical marginal after pair creation is thermal with this mean.
  const double mech_mean = (1 + p) * n_base + p;
  HeraldStage stage;
  stage.cutoff = quantum::cutoff_for_occupation(mech_mean, kCutoffTail) + 2;
  auto state = quantum::tensor(quantum::thermal_state(n_base, stage.cutoff),
                               quantum::fock_state(0, stage.cutoff));
  state = quantum::two_mode_squeeze(state, pair_squeezing(p));
  const auto det = detectors(c);
  stage.heralds = quantum::split_detection(state, Mode::B, det.write[0], det.write[1]);
  return stage;
}

OutcomeTable build_outcome_table(const ExperimentConfig& c, const HeraldStage& stage,
                                 double delta_t_ns) {
  if (!(delta_t_ns >= 0)) throw std::invalid_argument("build_outcome_table: delta t must be >= 0");
  OutcomeTable t;
  t.delta_t_ns = delta_t_ns;
  t.occupation = heating_occupation(delta_t_ns, c.heating);
  t.write_cutoff = stage.cutoff;
  const double added = t.occupation - c.heating.n_base + c.heating.read_heat;
  // Heralded states carry at most a few excitations on top of the added noise.
  t.read_cutoff = std::max(stage.cutoff, quantum::cutoff_for_occupation(
                                             c.heating.n_base + added, kCutoffTail) + 6);
  const auto det = detectors(c);
  for (unsigned w = 0; w < 4; ++w) {
    const auto& herald = stage.heralds[w];
    auto& branch = t.branches[w];
    branch.probability = herald.probability;
    if (herald.probability <= 0) continue;
    auto mech = herald.state.with_cutoff(t.read_cutoff);
    branch.occupation_heralded = quantum::mean_occupation(mech);
    mech = quantum::add_thermal_noise(mech, added);
    branch.occupation_at_read = quantum::mean_occupation(mech);
    const auto optical = quantum::transfer_to_vacuum_mode(mech, c.protocol.eps_read);
    const auto clicks = quantum::split_click_probabilities(optical, det.read[0], det.read[1]);
    for (unsigned r = 0; r < 4; ++r) t.p[w | (r << 2)] = herald.probability * clicks.p[r];
  }
  return t;
}

OutcomeTable build_outcome_table(const ExperimentConfig& c, double delta_t_ns) {
  return build_outcome_table(c, prepare_heralds(c), delta_t_ns);
}

std::vector<OutcomeTable> build_outcome_tables(const ExperimentConfig& c) {
  const auto stage = prepare_heralds(c);
  std::vector<OutcomeTable> out;
  for (double dt : c.protocol.delta_t_ns) out.push_back(build_outcome_table(c, stage, dt));
  return out;
}

// --- sampling --------------------------------------------------------------

std::vector<TrialGroup> trial_groups(const ExperimentConfig& c) {
  const auto& dts = c.protocol.delta_t_ns;
  const std::uint64_t n = dts.size();
  const std::uint64_t base = c.protocol.trials / n, extra = c.protocol.trials % n;
  std::vector<TrialGroup> groups;
  std::uint64_t first = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t count = base + (i < extra ? 1 : 0);
    groups.push_back({dts[i], first, count});
    first += count;
  }
  return groups;
}

namespace {

std::uint64_t to_ps(double ns) { return static_cast<std::uint64_t>(std::llround(ns * 1e3)); }

}  // namespace

WindowSpan write_window(const ExperimentConfig& c) { return {0, to_ps(c.chain.window_write_ns)}; }

WindowSpan read_window(const ExperimentConfig& c, double delta_t_ns) {
  return {to_ps(c.chain.window_write_ns) + to_ps(delta_t_ns), to_ps(c.chain.window_read_ns)};
}

namespace {

struct Chunk {
  std::vector<analysis::TagRecord> records;
  std::vector<std::array<std::uint64_t, 16>> counts;
};

void sample_range(const ExperimentConfig& c, const std::vector<TrialGroup>& groups,
                  const std::vector<std::array<double, 16>>& cdfs, std::uint64_t begin,
                  std::uint64_t end, Chunk& out) {
  out.counts.assign(groups.size(), {});
  std::size_t g = 0;
  const auto ww = write_window(c);
  for (std::uint64_t trial = begin; trial < end; ++trial) {
    while (trial >= groups[g].first_trial + groups[g].count) ++g;
    CounterRng rng(c.seed, trial);
    const double u = rng.uniform();
    const auto& cdf = cdfs[g];
    unsigned pattern = 0;
    while (pattern < 15 && u >= cdf[pattern]) ++pattern;
    ++out.counts[g][pattern];
    if (pattern == 0) continue;
    const auto rw = read_window(c, groups[g].delta_t_ns);
    const std::array<std::pair<unsigned, analysis::PulseLabel>, 4> bits{
        {{kW1, analysis::PulseLabel::Write},
         {kW2, analysis::PulseLabel::Write},
         {kR1, analysis::PulseLabel::Read},
         {kR2, analysis::PulseLabel::Read}}};
    for (int b = 0; b < 4; ++b) {
      if (!(pattern & bits[b].first)) continue;
      const auto& span = bits[b].second == analysis::PulseLabel::Write ? ww : rw;
      out.records.push_back({trial, static_cast<std::uint8_t>(b % 2), bits[b].second,
                             span.start_ps + rng.below(span.length_ps)});
    }
  }
}

}  // namespace

SampleResult sample_trials(const ExperimentConfig& c, const std::vector<OutcomeTable>& tables,
                           unsigned threads) {
  const auto groups = trial_groups(c);
  if (tables.size() != groups.size())
    throw std::invalid_argument("sample_trials: one outcome table per delay is required");
  std::vector<std::array<double, 16>> cdfs(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double acc = 0;
    for (unsigned k = 0; k < 16; ++k) cdfs[g][k] = acc += std::max(0.0, tables[g].p[k]);
    for (auto& v : cdfs[g]) v /= acc;
  }

  const std::uint64_t total = c.protocol.trials;
  threads = std::max(1u, threads);
  const std::uint64_t n_chunks = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(total, 1));
  std::vector<Chunk> chunks(n_chunks);
  std::vector<std::thread> workers;
  for (std::uint64_t i = 0; i < n_chunks; ++i) {
    const std::uint64_t begin = total * i / n_chunks, end = total * (i + 1) / n_chunks;
    if (n_chunks == 1) {
      sample_range(c, groups, cdfs, begin, end, chunks[i]);
    } else {
      workers.emplace_back([&, i, begin, end] { sample_range(c, groups, cdfs, begin, end, chunks[i]); });
    }
  }
  for (auto& w : workers) w.join();

  SampleResult result;
  result.stream.config_hash = config_hash(c);
  result.stream.trial_count = total;
  result.pattern_counts.assign(groups.size(), {});
  for (auto& chunk : chunks) {
    result.stream.records.insert(result.stream.records.end(), chunk.records.begin(),
                                 chunk.records.end());
    for (std::size_t g = 0; g < chunk.counts.size(); ++g)
      for (unsigned k = 0; k < 16; ++k) result.pattern_counts[g][k] += chunk.counts[g][k];
  }
  return result;
}

// --- pump-probe and thermometry --------------------------------------------

std::vector<PumpProbePoint> simulate_pump_probe(const ExperimentConfig& c,
                                                double pump_heat_amplitude,
                                                const std::vector<double>& delta_t_us) {
  auto heating = c.heating;
  heating.a_heat = pump_heat_amplitude;
  const double eta = c.detector_efficiency(0) + c.detector_efficiency(1);
  const double alpha = c.protocol.eps_read * eta;
  const double leak =
      eta * c.leak_photons(c.protocol.read_energy_fj) + 2 * c.dark_probability(c.chain.window_read_ns);
  std::vector<PumpProbePoint> out;
  for (double t : delta_t_us) {
    const double n = heating_occupation(t * 1e3, heating);
    out.push_back({t, n, alpha * n + leak});
  }
  return out;
}

namespace {

struct SidebandClicks {
  double blue = 0, red = 0, leak = 0;
};

SidebandClicks sideband_clicks(const ExperimentConfig& c, const DetectorModel<double>& d1,
                               const DetectorModel<double>& d2) {
  const double n = c.heating.n_base;
  const double s = c.thermometry.scattering;
  const int cutoff = quantum::cutoff_for_occupation((1 + s) * n + s, kCutoffTail) + 2;
  const auto mech = quantum::thermal_state(n, cutoff);
  auto pair = quantum::two_mode_squeeze(quantum::tensor_with_vacuum(mech), pair_squeezing(s));
  const auto stokes = pair.marginal(Mode::B);
  const auto anti_stokes = quantum::transfer_to_vacuum_mode(mech, s);
  SidebandClicks out;
  out.blue = quantum::split_click_probabilities(stokes, d1, d2).any_click();
  out.red = quantum::split_click_probabilities(anti_stokes, d1, d2).any_click();
  out.leak = quantum::split_click_probabilities(ModeState<double>::vacuum(1), d1, d2).any_click();
  return out;
}

}  // namespace

ThermometryResult simulate_thermometry(const ExperimentConfig& c, std::uint64_t pulses) {
  c.validate();
  if (pulses == 0) throw std::invalid_argument("simulate_thermometry: pulses must be > 0");
  const double leak = c.leak_photons(c.thermometry.pulse_energy_fj);
  const double dark = c.dark_probability(c.chain.window_read_ns);
  const DetectorModel<double> d1{c.detector_efficiency(0), dark, leak};
  const DetectorModel<double> d2{c.detector_efficiency(1), dark, leak};
  const auto expected = sideband_clicks(c, d1, d2);
  const auto ideal = sideband_clicks(c, {d1.efficiency}, {d2.efficiency});

  ThermometryResult r;
  r.pulses = pulses;
  r.expected_blue = expected.blue;
  r.expected_red = expected.red;
  r.expected_leak = expected.leak;
  r.ideal_asymmetry = ideal.red > 0 ? ideal.blue / ideal.red : INFINITY;
  // Separate key so thermometry draws never coincide with protocol trials.
  const std::uint64_t key = splitmix64(c.seed ^ 0x7468726d6f6d6574ULL);
  for (std::uint64_t i = 0; i < pulses; ++i) {
    CounterRng rng(key, i);
    r.blue_counts += rng.uniform() < expected.blue;
    r.red_counts += rng.uniform() < expected.red;
    r.leak_counts += rng.uniform() < expected.leak;
  }
  return r;
}

}  // namespace phononherald::sim
