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

#include <array>
#include <cstdint>
#include <vector>

#include "phononherald/analysis/tagstream.hpp"
#include "phononherald/quantum/detection.hpp"
#include "phononherald/sim/config.hpp"

namespace phononherald::sim {

/// n(dt) = n_base + a_heat (1 - exp(-dt / tau_rise)) exp(-dt / t_decay).
double heating_occupation(double delta_t_ns, const HeatingParams& heating);

/// Bits of a joint click pattern: write detectors 1/2, read detectors 1/2.
inline constexpr unsigned kW1 = 1, kW2 = 2, kR1 = 4, kR2 = 8;

/// Mechanical bookkeeping for one write click pattern.
struct WriteBranch {
  double probability = 0;
  /// Mean phonon number right after the write measurement.
  double occupation_heralded = 0;
  /// Mean phonon number when the read pulse arrives.
  double occupation_at_read = 0;
};

struct OutcomeTable {
  double delta_t_ns = 0;
  /// Heating-model occupation n(dt).
  double occupation = 0;
  int write_cutoff = 0;
  int read_cutoff = 0;
  std::array<double, 16> p{};
  std::array<WriteBranch, 4> branches{};

  double sum() const;
  double probability(unsigned mask, unsigned value) const;
  double write_click(int detector) const;
  double read_click(int detector) const;
  double any_write() const;
  double any_read() const;
  double write_coincidence() const;
  double read_coincidence() const;
  double write_and_read() const;

  double g2_cross() const;
  /// Write of one trial against the read of a different, independent trial.
  double g2_cross_offset() const;
  double g2_write_auto() const;
  double g2_read_auto() const;
  double classical_bound() const;
  /// Read-side autocorrelation conditioned on at least one write click.
  double heralded_read_g2() const;
};

struct DetectorSet {
  std::array<quantum::DetectorModel<double>, 2> write;
  std::array<quantum::DetectorModel<double>, 2> read;
};

DetectorSet detectors(const ExperimentConfig& config);

/// Write-side state of the protocol; independent of the read delay.
struct HeraldStage {
  int cutoff = 0;
  std::array<quantum::Herald<double>, 4> heralds;
};

HeraldStage prepare_heralds(const ExperimentConfig& config);
OutcomeTable build_outcome_table(const ExperimentConfig& config, const HeraldStage& stage,
                                 double delta_t_ns);
OutcomeTable build_outcome_table(const ExperimentConfig& config, double delta_t_ns);
/// One table per entry of protocol.delta_t_ns.
std::vector<OutcomeTable> build_outcome_tables(const ExperimentConfig& config);

/// Contiguous block of trials sharing one write-read delay.
struct TrialGroup {
  double delta_t_ns = 0;
  std::uint64_t first_trial = 0;
  std::uint64_t count = 0;
};

/// Splits protocol.trials evenly over protocol.delta_t_ns; earlier delays
/// take the remainder.
std::vector<TrialGroup> trial_groups(const ExperimentConfig& config);

/// Window start and length for one trial, in picoseconds from trial start.
struct WindowSpan {
  std::uint64_t start_ps = 0;
  std::uint64_t length_ps = 0;
};

WindowSpan write_window(const ExperimentConfig& config);
WindowSpan read_window(const ExperimentConfig& config, double delta_t_ns);

struct SampleResult {
  analysis::TagStream stream;
  /// Pattern histogram per trial group.
  std::vector<std::array<std::uint64_t, 16>> pattern_counts;
};

/// Draws one click pattern per trial and emits time tags. Output depends
/// only on (config, tables), never on `threads`.
SampleResult sample_trials(const ExperimentConfig& config, const std::vector<OutcomeTable>& tables,
                           unsigned threads = 1);

struct PumpProbePoint {
  double delta_t_us = 0;
  double occupation = 0;
  /// Expected read-window detection probability per probe pulse.
  double rate = 0;
};

/// C_R(dt) = alpha n(dt) + C_leak with the heating amplitude replaced by
/// `pump_heat_amplitude`.
std::vector<PumpProbePoint> simulate_pump_probe(const ExperimentConfig& config,
                                                double pump_heat_amplitude,
                                                const std::vector<double>& delta_t_us);

struct ThermometryResult {
  std::uint64_t pulses = 0;
  /// Pulses with at least one detector click.
  std::uint64_t blue_counts = 0;
  std::uint64_t red_counts = 0;
  /// Clicks during detuned calibration pulses, which only carry leaked pump light.
  std::uint64_t leak_counts = 0;
  double expected_blue = 0;
  double expected_red = 0;
  double expected_leak = 0;
  /// Blue/red click ratio for noiseless detectors without leakage.
  double ideal_asymmetry = 0;

  double rate_blue() const { return double(blue_counts) / double(pulses); }
  double rate_red() const { return double(red_counts) / double(pulses); }
  double rate_leak() const { return double(leak_counts) / double(pulses); }
};

ThermometryResult simulate_thermometry(const ExperimentConfig& config, std::uint64_t pulses);

}  // namespace phononherald::sim
