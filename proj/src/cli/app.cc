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

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "phononherald/cli/commands.hpp"
#include "phononherald/errors.hpp"

namespace phononherald::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string hex(std::uint64_t v) { return fmt::format("{:016x}", v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create directory " + dir.string());
}

/// Provenance record written next to every output. Only the manifest holds
/// timestamps, so the data files themselves stay byte-identical on reruns.
struct Manifest {
  explicit Manifest(std::string name) : subcommand(std::move(name)) {}

  std::string subcommand;
  json overrides = json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started = utc_now();

  void write(const fs::path& path, const sim::ExperimentConfig& config) const {
    write_json(path, {{"tool", "phononherald"},
                      {"version", kToolVersion},
                      {"subcommand", subcommand},
                      {"config_hash", hex(sim::config_hash(config))},
                      {"seed", config.seed},
                      {"overrides", overrides},
                      {"inputs", inputs},
                      {"outputs", outputs},
                      {"started_utc", started},
                      {"finished_utc", utc_now()},
                      {"config", sim::config_to_json(config)}});
  }
};

fs::path sidecar(const fs::path& file) { return fs::path(file.string() + ".manifest.json"); }

/// Options shared by the subcommands that build a configuration.
struct ConfigOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::vector<double> delta_t_ns;

  void attach(CLI::App* app, bool protocol_overrides) {
    app->add_option("--config", config_path, "Experiment config (JSON); defaults to the shipped set");
    app->add_option("--seed", seed, "Override the RNG seed");
    if (!protocol_overrides) return;
    app->add_option("--trials", trials, "Override protocol.trials");
    app->add_option("--delta-t-ns", delta_t_ns, "Override protocol.delta_t_ns (comma separated)")
        ->delimiter(',');
  }

  sim::ExperimentConfig load(Manifest& m) const {
    auto c = config_path.empty() ? default_config() : sim::load_config(config_path);
    if (!config_path.empty()) m.inputs.push_back(config_path);
    if (seed) c.seed = *seed, m.overrides["seed"] = *seed;
    if (trials) c.protocol.trials = *trials, m.overrides["trials"] = *trials;
    if (!delta_t_ns.empty()) c.protocol.delta_t_ns = delta_t_ns, m.overrides["delta_t_ns"] = delta_t_ns;
    c.validate();
    return c;
  }
};

void configure_logging() {
  auto logger = spdlog::get("phononherald");
  if (!logger) logger = spdlog::stderr_color_mt("phononherald");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("PHONONHERALD_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::info);
}

std::string fmt_estimate(const std::optional<analysis::CorrelationEstimate>& e) {
  if (!e) return "n/a";
  return fmt::format("{:.3f} (+{:.3f}/-{:.3f})", e->value, e->sigma_plus, e->sigma_minus);
}

void log_report(const analysis::AnalysisReport& report) {
  for (const auto& d : report.delays) {
    spdlog::info("dt = {} ns: g2_om {}, bound {}, {}", d.delta_t_ns, fmt_estimate(d.cross),
                 fmt_estimate(d.bound),
                 d.verdict ? (d.verdict->violated ? "violated" : "not violated") : "no verdict");
    for (const auto& n : d.notes) spdlog::warn("dt = {} ns: {}", d.delta_t_ns, n);
  }
}

// --- subcommands ---------------------------------------------------------------

struct SimulateCmd {
  ConfigOptions config;
  std::string out;

  int operator()(unsigned threads) const {
    Manifest m{"simulate"};
    const auto c = config.load(m);
    spdlog::info("simulating {} trials over {} delays", c.protocol.trials, c.protocol.delta_t_ns.size());
    const auto result = run_simulation(c, threads);
    analysis::write_tagstream(out, result.stream);
    spdlog::info("wrote {} records to {}", result.stream.records.size(), out);
    m.outputs.push_back(out);
    m.write(sidecar(out), c);
    return kExitOk;
  }
};

struct AnalyzeCmd {
  std::string stream_path;
  std::string config_path;
  std::string out;
  std::optional<double> read_window_ns;
  int delta_n = 0;

  int operator()() const {
    Manifest m{"analyze"};
    m.inputs.push_back(stream_path);
    sim::ExperimentConfig c;
    if (!config_path.empty()) {
      c = sim::load_config(config_path);
      m.inputs.push_back(config_path);
    } else if (fs::exists(sidecar(stream_path))) {
      std::ifstream in(sidecar(stream_path));
      c = sim::config_from_json(json::parse(in).at("config"));
      m.inputs.push_back(sidecar(stream_path).string());
    } else {
      c = default_config();
    }
    if (read_window_ns) m.overrides["read_window_ns"] = *read_window_ns;
    if (delta_n) m.overrides["delta_n"] = delta_n;

    const auto stream = analysis::read_tagstream(stream_path);
    const auto report = analyze_stream(stream, c, read_window_ns, offset_sweep(delta_n));
    log_report(report);

    ensure_directory(out);
    const fs::path dir(out);
    write_text(dir / "correlations.csv", analysis::correlation_csv(report));
    m.outputs.push_back((dir / "correlations.csv").string());
    if (delta_n > 0) {
      write_text(dir / "delta_n.csv", analysis::offset_csv(report));
      m.outputs.push_back((dir / "delta_n.csv").string());
    }
    write_json(dir / "summary.json", analysis::to_json(report));
    m.outputs.push_back((dir / "summary.json").string());
    m.write(dir / "manifest.json", c);
    if (!report.complete()) {
      spdlog::error("some delays have no defined estimate; see summary.json notes");
      return kExitEstimation;
    }
    return kExitOk;
  }
};

struct ThermometryCmd {
  ConfigOptions config;
  std::uint64_t pulses = 1000000;
  std::string out;

  int operator()() const {
    Manifest m{"thermometry"};
    const auto c = config.load(m);
    m.overrides["pulses"] = pulses;
    const auto report = run_thermometry(c, pulses);
    const auto& o = report.corrected;
    spdlog::info("n_th = {:.4f} (+{:.4f}/-{:.4f}), raw {:.4f}, ideal asymmetry {:.2f}", o.value,
                 o.sigma_plus, o.sigma_minus, report.raw.value, report.run.ideal_asymmetry);
    write_json(out, to_json(report));
    m.outputs.push_back(out);
    m.write(sidecar(out), c);
    return kExitOk;
  }
};

std::string fig2_csv(const ThermometryReport& r) {
  const auto& run = r.run;
  std::string s = "pulse,counts,pulses,rate,expected_rate\n";
  auto row = [&](const char* name, std::uint64_t n, double expected) {
    s += fmt::format("{},{},{},{:.9g},{:.9g}\n", name, n, run.pulses, double(n) / double(run.pulses), expected);
  };
  row("blue", run.blue_counts, run.expected_blue);
  row("red", run.red_counts, run.expected_red);
  row("leak", run.leak_counts, run.expected_leak);
  return s;
}

std::string fig3b_csv(const analysis::AnalysisReport& report) {
  std::string s = "delta_n,g2_om,ci_minus,ci_plus\n";
  std::vector<std::pair<std::int64_t, analysis::CorrelationEstimate>> rows;
  if (report.delays.front().cross) rows.emplace_back(0, *report.delays.front().cross);
  for (const auto& o : report.offsets)
    if (o.cross) rows.emplace_back(o.delta_n, *o.cross);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [n, e] : rows)
    s += fmt::format("{},{:.9g},{:.9g},{:.9g}\n", n, e.value, e.sigma_minus, e.sigma_plus);
  return s;
}

std::string fig3c_csv(const DecaySweep& sweep) {
  std::string s =
      "delta_t_ns,model_g2_om,model_bound,g2_om,ci_minus,ci_plus,bound,bound_ci_minus,bound_ci_plus,"
      "violated\n";
  auto num = [](const std::optional<analysis::CorrelationEstimate>& e) {
    return e ? fmt::format("{:.9g},{:.9g},{:.9g}", e->value, e->sigma_minus, e->sigma_plus)
             : std::string("nan,nan,nan");
  };
  for (std::size_t i = 0; i < sweep.model.size(); ++i) {
    const auto& m = sweep.model[i];
    const auto& d = sweep.measured.delays[i];
    s += fmt::format("{},{:.9g},{:.9g},{},{},{}\n", m.delta_t_ns, m.model_g2_om, m.model_bound,
                     num(d.cross), num(d.bound), d.verdict ? (d.verdict->violated ? 1 : 0) : -1);
  }
  return s;
}

std::string m3_csv(const std::vector<sim::PumpProbePoint>& points, const std::vector<double>* compensated) {
  std::string s = compensated ? "delta_t_us,occupation,rate,rate_compensated\n" : "delta_t_us,occupation,rate\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    s += fmt::format("{:.9g},{:.9g},{:.9g}", p.delta_t_us, p.occupation, p.rate);
    s += compensated ? fmt::format(",{:.9g}\n", (*compensated)[i]) : "\n";
  }
  return s;
}

json to_json(const analysis::ExpFit& f) {
  return {{"amplitude", f.amplitude},
          {"time_constant_us", f.time_constant},
          {"offset", f.offset},
          {"rms_residual", f.rms_residual}};
}

struct ReproduceCmd {
  ConfigOptions config;
  std::string figure;
  std::string out;
  std::uint64_t pulses = 1000000;

  int operator()(unsigned threads) const {
    Manifest m{"reproduce"};
    m.overrides["figure"] = figure;
    auto c = config.load(m);
    ensure_directory(out);
    const fs::path dir(out);
    auto emit_text = [&](const std::string& name, const std::string& text) {
      write_text(dir / name, text);
      m.outputs.push_back((dir / name).string());
    };
    auto emit_json = [&](const std::string& name, const json& j) { emit_text(name, j.dump(2) + "\n"); };

    int code = kExitOk;
    if (figure == "fig2") {
      const auto r = run_thermometry(c, pulses);
      m.overrides["pulses"] = pulses;
      emit_text("fig2_sidebands.csv", fig2_csv(r));
      emit_json("fig2_summary.json", to_json(r));
    } else if (figure == "fig3b") {
      if (config.delta_t_ns.empty()) c.protocol.delta_t_ns = {100};
      if (c.protocol.delta_t_ns.size() != 1)
        throw ConfigError("protocol.delta_t_ns", "fig3b uses a single delay");
      const auto sample = run_simulation(c, threads);
      const auto report = analyze_stream(sample.stream, c, std::nullopt, offset_sweep(10));
      log_report(report);
      emit_text("fig3b_delta_n.csv", fig3b_csv(report));
      emit_json("fig3b_summary.json", analysis::to_json(report));
      if (!report.complete()) code = kExitEstimation;
    } else if (figure == "fig3c") {
      std::vector<double> delays = {100, 200, 300, 500, 750, 1000, 1250, 1500};
      if (!config.delta_t_ns.empty()) delays = config.delta_t_ns;
      const auto sweep = run_decay_sweep(c, delays, threads);
      log_report(sweep.measured);
      emit_text("fig3c_decay.csv", fig3c_csv(sweep));
      emit_json("fig3c_summary.json", analysis::to_json(sweep.measured));
    } else if (figure == "m3") {
      const auto s = run_pump_probe_study(c);
      spdlog::info("decay {:.3f} us, rise {:.4f} us", s.decay.time_constant, s.rise.time_constant);
      emit_text("m3_long_term.csv", m3_csv(s.long_term, nullptr));
      emit_text("m3_short_term.csv", m3_csv(s.short_term, &s.short_term_compensated));
      emit_json("m3_fits.json", {{"pump_heat_amplitude", s.pump_heat_amplitude},
                                 {"decay", to_json(s.decay)},
                                 {"rise", to_json(s.rise)}});
    } else {
      throw ConfigError("figure", "unknown figure '" + figure + "'");
    }
    m.write(dir / "manifest.json", c);
    return code;
  }
};

struct CalibrateCmd {
  ConfigOptions config;
  std::string target;
  std::string out;

  int operator()() const {
    Manifest m{"calibrate-heating"};
    const auto c = config.load(m);
    m.inputs.push_back(target);
    const auto points = read_target_csv(target);
    const auto cal = calibrate_heating(c, points);
    json j = {{"a_heat", cal.a_heat}, {"rms_relative", cal.rms_relative}, {"points", json::array()}};
    for (std::size_t i = 0; i < points.size(); ++i)
      j["points"].push_back({{"delta_t_ns", points[i].delta_t_ns},
                             {"target_g2_om", points[i].g2_om},
                             {"model_g2_om", cal.model[i]}});
    std::cout << fmt::format("a_heat = {:.6g}\n", cal.a_heat);
    if (!out.empty()) {
      write_json(out, j);
      m.outputs.push_back(out);
      m.write(sidecar(out), c);
    }
    return kExitOk;
  }
};

}  // namespace

int run(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Simulate and analyze heralded photon-phonon correlation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker cap; does not change outputs (0 = all cores)");

  SimulateCmd simulate;
  auto* sim_app = app.add_subcommand("simulate", "Sample trials and write a time-tag stream");
  simulate.config.attach(sim_app, true);
  sim_app->add_option("--out", simulate.out, "Output tag stream")->required();
  sim_app->add_option("--threads", threads, "Worker cap");

  AnalyzeCmd analyze;
  auto* an_app = app.add_subcommand("analyze", "Correlation analysis of a tag stream");
  an_app->add_option("stream", analyze.stream_path, "Tag stream")->required();
  an_app->add_option("--config", analyze.config_path,
                     "Config the stream was produced with; defaults to the stream's manifest");
  an_app->add_option("--out", analyze.out, "Output directory")->required();
  an_app->add_option("--read-window-ns", analyze.read_window_ns, "Evaluate only the start of each read window");
  an_app->add_option("--delta-n", analyze.delta_n, "Also evaluate trial offsets -N..N")
      ->check(CLI::Range(0, 1000));
  an_app->add_option("--threads", threads, "Worker cap");

  ThermometryCmd thermometry;
  auto* th_app = app.add_subcommand("thermometry", "Sideband-asymmetry thermometry");
  thermometry.config.attach(th_app, false);
  th_app->add_option("--pulses", thermometry.pulses, "Pulse pairs");
  th_app->add_option("--out", thermometry.out, "Output JSON report")->required();

  ReproduceCmd reproduce;
  auto* re_app = app.add_subcommand("reproduce", "Write the data series behind one figure");
  reproduce.config.attach(re_app, true);
  re_app->add_option("--figure", reproduce.figure, "fig2, fig3b, fig3c or m3")->required();
  re_app->add_option("--out", reproduce.out, "Output directory")->required();
  re_app->add_option("--pulses", reproduce.pulses, "Pulse pairs for fig2");
  re_app->add_option("--threads", threads, "Worker cap");

  CalibrateCmd calibrate;
  auto* ca_app = app.add_subcommand("calibrate-heating", "Fit heating.a_heat to a target g2_om curve");
  calibrate.config.attach(ca_app, false);
  ca_app->add_option("--target", calibrate.target, "CSV with delta_t_ns,g2_om")->required();
  ca_app->add_option("--out", calibrate.out, "Optional JSON result");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  try {
    if (sim_app->parsed()) return simulate(threads);
    if (an_app->parsed()) return analyze();
    if (th_app->parsed()) return thermometry();
    if (re_app->parsed()) return reproduce(threads);
    if (ca_app->parsed()) return calibrate();
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const TruncationError& e) {
    spdlog::error("truncation error: {}", e.what());
    return kExitPhysics;
  } catch (const FormatError& e) {
    spdlog::error("format error: {}", e.what());
    return kExitFormat;
  } catch (const json::exception& e) {
    spdlog::error("format error: {}", e.what());
    return kExitFormat;
  } catch (const std::domain_error& e) {
    spdlog::error("estimation error: {}", e.what());
    return kExitEstimation;
  } catch (const std::invalid_argument& e) {
    spdlog::error("invalid argument: {}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return kExitConfig;
}

}  // namespace phononherald::cli
