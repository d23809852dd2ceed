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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "phononherald/analysis/fit.hpp"
#include "phononherald/analysis/report.hpp"
#include "phononherald/sim/protocol.hpp"

namespace phononherald::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPhysics = 3;
inline constexpr int kExitFormat = 4;
/// Estimates undefined or a calibration target out of reach.
inline constexpr int kExitEstimation = 5;

inline constexpr const char* kToolVersion = "0.1.0";

/// The parameter set shipped as configs/paper_default.json, compiled in.
const std::string& default_config_text();
sim::ExperimentConfig default_config();

/// Window layout the simulator uses for `config`, optionally trimmed to the
/// first `read_window_ns` of each read window.
analysis::TabulationSpec tabulation_spec(const sim::ExperimentConfig& config,
                                         std::optional<double> read_window_ns = std::nullopt);

sim::SampleResult run_simulation(const sim::ExperimentConfig& config, unsigned threads);

/// Throws FormatError if the stream header carries a different config hash.
analysis::AnalysisReport analyze_stream(const analysis::TagStream& stream,
                                        const sim::ExperimentConfig& config,
                                        std::optional<double> read_window_ns,
                                        const std::vector<std::int64_t>& delta_n);

/// Offsets -n..-1, 1..n.
std::vector<std::int64_t> offset_sweep(int n);

struct ThermometryReport {
  sim::ThermometryResult run;
  analysis::Occupancy corrected;
  analysis::Occupancy raw;
  /// (blue - leak) / (red - leak) from the counts.
  double asymmetry = 0;
  /// The interval reaches zero, so only an upper limit is meaningful.
  bool upper_limit_only = false;
};

ThermometryReport run_thermometry(const sim::ExperimentConfig& config, std::uint64_t pulses);
nlohmann::json to_json(const ThermometryReport& report);

struct TargetPoint {
  double delta_t_ns = 0;
  double g2_om = 0;
};

/// Two columns, delta_t_ns and g2_om, with a header line.
std::vector<TargetPoint> read_target_csv(const std::string& path);

struct HeatingCalibration {
  double a_heat = 0;
  /// RMS of (model - target) / target at the optimum.
  double rms_relative = 0;
  std::vector<double> model;
};

/// Bounded search over a_heat in [0, 10]. Throws EstimationError when the
/// best fit still misses the target by more than `tolerance` (relative RMS).
HeatingCalibration calibrate_heating(const sim::ExperimentConfig& config,
                                     const std::vector<TargetPoint>& target,
                                     double tolerance = 0.01);

struct DecaySweepRow {
  double delta_t_ns = 0;
  /// Expected values from the outcome table.
  double model_g2_om = 0;
  double model_bound = 0;
};

struct DecaySweep {
  std::vector<DecaySweepRow> model;
  analysis::AnalysisReport measured;
};

/// Simulates protocol.trials trials at every delay and analyzes them.
DecaySweep run_decay_sweep(const sim::ExperimentConfig& config, const std::vector<double>& delays_ns,
                           unsigned threads);

struct PumpProbeStudy {
  double pump_heat_amplitude = 0;
  std::vector<sim::PumpProbePoint> long_term;
  std::vector<sim::PumpProbePoint> short_term;
  /// Short-term rates with the fitted slow decay divided out.
  std::vector<double> short_term_compensated;
  analysis::ExpFit decay;
  analysis::ExpFit rise;
};

/// Pump pulses five times the write energy; the decay is fitted for
/// delays >= `decay_fit_start_us`, the rise on the compensated short series.
PumpProbeStudy run_pump_probe_study(const sim::ExperimentConfig& config,
                                    double decay_fit_start_us = 5.0);

/// Parses argv and runs one subcommand. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace phononherald::cli
