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

#include "phononherald/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "phononherald/errors.hpp"

namespace phononherald::cli {

sim::ExperimentConfig default_config() {
  return sim::config_from_json(nlohmann::json::parse(default_config_text(), nullptr, true, true));
}

analysis::TabulationSpec tabulation_spec(const sim::ExperimentConfig& config,
                                         std::optional<double> read_window_ns) {
  if (read_window_ns) {
    if (!(*read_window_ns > 0) || *read_window_ns > config.chain.window_read_ns)
      throw ConfigError("read_window_ns", "must lie in (0, chain.window_read_ns]");
  }
  analysis::TabulationSpec spec;
  const auto w = sim::write_window(config);
  spec.write_start_ps = w.start_ps;
  spec.write_length_ps = w.length_ps;
  for (const auto& g : sim::trial_groups(config)) {
    const auto r = sim::read_window(config, g.delta_t_ns);
    spec.groups.push_back({g.delta_t_ns, g.first_trial, g.count, r.start_ps, r.length_ps});
  }
  spec.read_trim_ns = read_window_ns;
  return spec;
}

sim::SampleResult run_simulation(const sim::ExperimentConfig& config, unsigned threads) {
  config.validate();
  return sim::sample_trials(config, sim::build_outcome_tables(config), threads);
}

analysis::AnalysisReport analyze_stream(const analysis::TagStream& stream,
                                        const sim::ExperimentConfig& config,
                                        std::optional<double> read_window_ns,
                                        const std::vector<std::int64_t>& delta_n) {
  config.validate();
  const std::uint64_t hash = sim::config_hash(config);
  if (stream.config_hash != hash) {
    std::ostringstream msg;
    msg << std::hex << "config hash mismatch: stream " << stream.config_hash << ", config " << hash;
    throw FormatError(msg.str(), 8);
  }
  const auto table = analysis::tabulate(stream, tabulation_spec(config, read_window_ns));
  auto report = analysis::analyze(table, {delta_n});
  report.config_hash = hash;
  report.read_trim_ns = read_window_ns;
  return report;
}

std::vector<std::int64_t> offset_sweep(int n) {
  std::vector<std::int64_t> out;
  for (int k = -n; k <= n; ++k)
    if (k != 0) out.push_back(k);
  return out;
}

// --- thermometry -------------------------------------------------------------

ThermometryReport run_thermometry(const sim::ExperimentConfig& config, std::uint64_t pulses) {
  if (pulses == 0) throw ConfigError("pulses", "must be positive");
  ThermometryReport r;
  r.run = sim::simulate_thermometry(config, pulses);
  const auto& run = r.run;
  r.corrected = analysis::sideband_occupancy(run.red_counts, run.blue_counts, run.leak_counts, pulses);
  r.raw = analysis::sideband_occupancy(run.red_counts, run.blue_counts, 0, pulses);
  const double red = double(run.red_counts) - double(run.leak_counts);
  r.asymmetry = red > 0 ? (double(run.blue_counts) - double(run.leak_counts)) / red
                        : std::numeric_limits<double>::infinity();
  r.upper_limit_only = r.corrected.value - r.corrected.sigma_minus <= 0;
  return r;
}

namespace {

nlohmann::json to_json(const analysis::Occupancy& o) {
  return {{"value", o.value}, {"ci_minus", o.sigma_minus}, {"ci_plus", o.sigma_plus}};
}

}  // namespace

nlohmann::json to_json(const ThermometryReport& r) {
  const auto& run = r.run;
  nlohmann::json j = {
      {"pulses", run.pulses},
      {"counts", {{"blue", run.blue_counts}, {"red", run.red_counts}, {"leak", run.leak_counts}}},
      {"rates", {{"blue", run.rate_blue()}, {"red", run.rate_red()}, {"leak", run.rate_leak()}}},
      {"expected", {{"blue", run.expected_blue}, {"red", run.expected_red}, {"leak", run.expected_leak}}},
      {"n_th", to_json(r.corrected)},
      {"n_th_raw", to_json(r.raw)},
      {"asymmetry", r.asymmetry},
      {"ideal_asymmetry", run.ideal_asymmetry},
      {"upper_limit_only", r.upper_limit_only},
  };
  if (r.upper_limit_only) j["n_th_upper_limit"] = r.corrected.value + r.corrected.sigma_plus;
  return j;
}

// --- heating calibration -----------------------------------------------------

std::vector<TargetPoint> read_target_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open target file");
  std::vector<TargetPoint> out;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    // An optional column header precedes the first data row.
    const bool numeric = line.find_first_of("0123456789.+-") == 0;
    if (std::exchange(header, false) && !numeric) continue;
    std::istringstream fields(line);
    TargetPoint p;
    char comma = 0;
    if (!(fields >> p.delta_t_ns >> comma >> p.g2_om) || comma != ',')
      throw ConfigError(path + ":" + std::to_string(line_no), "expected 'delta_t_ns,g2_om'");
    if (!(p.delta_t_ns >= 0) || !(p.g2_om > 0))
      throw ConfigError(path + ":" + std::to_string(line_no), "values out of range");
    out.push_back(p);
  }
  if (out.empty()) throw ConfigError(path, "no target points");
  return out;
}

HeatingCalibration calibrate_heating(const sim::ExperimentConfig& config,
                                     const std::vector<TargetPoint>& target, double tolerance) {
  config.validate();
  if (target.empty()) throw EstimationError("calibrate_heating: empty target");
  constexpr double kMaxHeat = 10;
  const auto stage = sim::prepare_heralds(config);

  auto model = [&](double a) {
    auto c = config;
    c.heating.a_heat = a;
    std::vector<double> g;
    for (const auto& p : target) g.push_back(sim::build_outcome_table(c, stage, p.delta_t_ns).g2_cross());
    return g;
  };
  auto cost = [&](double a) {
    const auto g = model(a);
    double s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(g[i] / target[i].g2_om - 1, 2);
    return s / double(g.size());
  };

  std::uintmax_t iterations = 200;
  auto [a, best] = boost::math::tools::brent_find_minima(cost, 0.0, kMaxHeat, 40, iterations);
  // Brent never evaluates the end points themselves.
  for (double edge : {0.0, kMaxHeat}) {
    const double c = cost(edge);
    if (c <= best) a = edge, best = c;
  }

  HeatingCalibration out{a, std::sqrt(best), model(a)};
  if (out.rms_relative > tolerance) {
    std::ostringstream msg;
    msg << "calibrate_heating: target not reachable for a_heat in [0, " << kMaxHeat
        << "]; best a_heat " << a << " leaves relative RMS residual " << out.rms_relative;
    throw EstimationError(msg.str());
  }
  return out;
}

// --- figure sweeps -----------------------------------------------------------

DecaySweep run_decay_sweep(const sim::ExperimentConfig& config, const std::vector<double>& delays_ns,
                           unsigned threads) {
  auto c = config;
  c.protocol.delta_t_ns = delays_ns;
  c.protocol.trials = config.protocol.trials * delays_ns.size();
  c.validate();
  DecaySweep out;
  const auto tables = sim::build_outcome_tables(c);
  for (const auto& t : tables) out.model.push_back({t.delta_t_ns, t.g2_cross(), t.classical_bound()});
  const auto sample = sim::sample_trials(c, tables, threads);
  out.measured = analyze_stream(sample.stream, c, std::nullopt, {});
  return out;
}

PumpProbeStudy run_pump_probe_study(const sim::ExperimentConfig& config, double decay_fit_start_us) {
  config.validate();
  if (config.heating.a_heat <= 0) throw EstimationError("pump-probe study needs a_heat > 0");
  PumpProbeStudy s;
  s.pump_heat_amplitude = 5 * config.heating.a_heat;

  const std::vector<double> long_delays = {0.25, 0.5, 1,  2,  3,  5,  7.5, 10,  15,  20,
                                           25,   30,  40, 50, 60, 80, 100, 120, 150, 200};
  std::vector<double> short_delays;
  for (int i = 0; i <= 30; ++i) short_delays.push_back(0.1 * i);
  s.long_term = sim::simulate_pump_probe(config, s.pump_heat_amplitude, long_delays);
  s.short_term = sim::simulate_pump_probe(config, s.pump_heat_amplitude, short_delays);

  std::vector<double> t, y;
  for (const auto& p : s.long_term) {
    if (p.delta_t_us < decay_fit_start_us) continue;
    t.push_back(p.delta_t_us);
    y.push_back(p.rate);
  }
  s.decay = analysis::fit_exponential(t, y, analysis::ExpModel::Decay);

  // The rate before the pump acts sets the baseline; dividing the slow
  // decay out of the excess leaves a pure rise.
  const double base = s.short_term.front().rate;
  t.clear();
  for (const auto& p : s.short_term) {
    t.push_back(p.delta_t_us);
    s.short_term_compensated.push_back(base + (p.rate - base) * std::exp(p.delta_t_us / s.decay.time_constant));
  }
  s.rise = analysis::fit_exponential(t, s.short_term_compensated, analysis::ExpModel::Rise);
  return s;
}

}  // namespace phononherald::cli
