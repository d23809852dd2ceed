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


#include "phononherald/sim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "phononherald/errors.hpp"

namespace phononherald::sim {
namespace {

using nlohmann::json;

constexpr double kPlanck = 6.62607015e-34;
constexpr double kLightSpeed = 299792458.0;

// Walks one JSON object, reading known keys and rejecting anything else.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->template get<std::int64_t>() >= 0))
          throw ConfigError(field(key), "expected a non-negative integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw ConfigError(field(key), "expected a number");
      }
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), e.what());
    }
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    static const json empty = json::object();
    return Section(it == j_.end() ? empty : *it, field(key));
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

void unit_interval(double v, const std::string& path) {
  require(std::isfinite(v) && v >= 0 && v <= 1, path, "must lie in [0, 1]");
}

void positive(double v, const std::string& path) {
  require(std::isfinite(v) && v > 0, path, "must be > 0");
}

void non_negative(double v, const std::string& path) {
  require(std::isfinite(v) && v >= 0, path, "must be >= 0");
}

}  // namespace

void ExperimentConfig::validate() const {
  positive(device.omega_m_ghz, "device.omega_m_ghz");
  positive(device.kappa_c_ghz, "device.kappa_c_ghz");
  positive(device.g0_khz, "device.g0_khz");
  positive(device.quality_factor, "device.quality_factor");
  positive(device.wavelength_nm, "device.wavelength_nm");

  unit_interval(chain.eta_fc, "chain.eta_fc");
  unit_interval(chain.eta_c, "chain.eta_c");
  unit_interval(chain.eta_path1, "chain.eta_path1");
  unit_interval(chain.eta_path2, "chain.eta_path2");
  unit_interval(chain.eta_qe1, "chain.eta_qe1");
  unit_interval(chain.eta_qe2, "chain.eta_qe2");
  require(detector_efficiency(0) + detector_efficiency(1) <= 1, "chain",
          "detector efficiencies sum above 1");
  non_negative(chain.dark_rate_hz, "chain.dark_rate_hz");
  non_negative(chain.suppression_db, "chain.suppression_db");
  positive(chain.window_write_ns, "chain.window_write_ns");
  positive(chain.window_read_ns, "chain.window_read_ns");
  require(dark_probability(std::max(chain.window_write_ns, chain.window_read_ns)) < 1,
          "chain.dark_rate_hz", "dark count probability per window reaches 1");

  unit_interval(protocol.p_pair, "protocol.p_pair");
  require(protocol.p_pair < 0.5, "protocol.p_pair", "must be < 0.5 for a truncated description");
  require(protocol.p_pair * (1 + heating.n_base) <= 0.3, "protocol.p_pair",
          "p_pair * (1 + n_base) exceeds 0.3; the Fock truncation would be unsafe");
  unit_interval(protocol.eps_read, "protocol.eps_read");
  require(!protocol.delta_t_ns.empty(), "protocol.delta_t_ns", "must not be empty");
  for (std::size_t i = 0; i < protocol.delta_t_ns.size(); ++i) {
    const auto path = "protocol.delta_t_ns[" + std::to_string(i) + "]";
    non_negative(protocol.delta_t_ns[i], path);
    if (i > 0) require(protocol.delta_t_ns[i] > protocol.delta_t_ns[i - 1], path, "must be ascending");
  }
  positive(protocol.rep_period_ms, "protocol.rep_period_ms");
  require(protocol.delta_t_ns.back() + chain.window_write_ns + chain.window_read_ns <
              protocol.rep_period_ms * 1e6,
          "protocol.delta_t_ns", "read window extends past the repetition period");
  non_negative(protocol.write_energy_fj, "protocol.write_energy_fj");
  non_negative(protocol.read_energy_fj, "protocol.read_energy_fj");

  non_negative(heating.n_base, "heating.n_base");
  require(heating.n_base <= 5, "heating.n_base", "must be <= 5");
  non_negative(heating.a_heat, "heating.a_heat");
  require(heating.a_heat <= 10, "heating.a_heat", "must be <= 10");
  positive(heating.tau_rise_us, "heating.tau_rise_us");
  positive(heating.t_decay_us, "heating.t_decay_us");
  non_negative(heating.read_heat, "heating.read_heat");

  non_negative(thermometry.pulse_energy_fj, "thermometry.pulse_energy_fj");
  unit_interval(thermometry.scattering, "thermometry.scattering");
  require(thermometry.scattering <= 0.3, "thermometry.scattering", "must be <= 0.3");
}

double ExperimentConfig::detector_efficiency(int detector) const {
  const double path = detector == 0 ? chain.eta_path1 : chain.eta_path2;
  const double qe = detector == 0 ? chain.eta_qe1 : chain.eta_qe2;
  return chain.eta_c * chain.eta_fc * path * qe;
}

double ExperimentConfig::leak_photons(double pulse_energy_fj) const {
  const double photon_energy = kPlanck * kLightSpeed / (device.wavelength_nm * 1e-9);
  return pulse_energy_fj * 1e-15 / photon_energy * std::pow(10.0, -chain.suppression_db / 10.0);
}

double ExperimentConfig::dark_probability(double window_ns) const {
  return -std::expm1(-chain.dark_rate_hz * window_ns * 1e-9);
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  Section root(j, "");
  {
    auto s = root.child("device");
    s.read("omega_m_ghz", c.device.omega_m_ghz);
    s.read("kappa_c_ghz", c.device.kappa_c_ghz);
    s.read("g0_khz", c.device.g0_khz);
    s.read("quality_factor", c.device.quality_factor);
    s.read("wavelength_nm", c.device.wavelength_nm);
    s.reject_unknown();
  }
  {
    auto s = root.child("chain");
    s.read("eta_fc", c.chain.eta_fc);
    s.read("eta_c", c.chain.eta_c);
    s.read("eta_path1", c.chain.eta_path1);
    s.read("eta_path2", c.chain.eta_path2);
    s.read("eta_qe1", c.chain.eta_qe1);
    s.read("eta_qe2", c.chain.eta_qe2);
    s.read("dark_rate_hz", c.chain.dark_rate_hz);
    s.read("suppression_db", c.chain.suppression_db);
    s.read("window_write_ns", c.chain.window_write_ns);
    s.read("window_read_ns", c.chain.window_read_ns);
    s.reject_unknown();
  }
  {
    auto s = root.child("protocol");
    s.read("p_pair", c.protocol.p_pair);
    s.read("eps_read", c.protocol.eps_read);
    s.read("delta_t_ns", c.protocol.delta_t_ns);
    s.read("rep_period_ms", c.protocol.rep_period_ms);
    s.read("trials", c.protocol.trials);
    s.read("write_energy_fj", c.protocol.write_energy_fj);
    s.read("read_energy_fj", c.protocol.read_energy_fj);
    s.reject_unknown();
  }
  {
    auto s = root.child("heating");
    s.read("n_base", c.heating.n_base);
    s.read("a_heat", c.heating.a_heat);
    s.read("tau_rise_us", c.heating.tau_rise_us);
    s.read("t_decay_us", c.heating.t_decay_us);
    s.read("read_heat", c.heating.read_heat);
    s.reject_unknown();
  }
  {
    auto s = root.child("thermometry");
    s.read("pulse_energy_fj", c.thermometry.pulse_energy_fj);
    s.read("scattering", c.thermometry.scattering);
    s.reject_unknown();
  }
  root.read("seed", c.seed);
  // Free-form annotations are allowed at the top level only.
  std::string comment;
  root.read("$schema", comment);
  root.read("_comment", comment);
  nlohmann::json notes;
  root.read("_notes", notes);
  root.reject_unknown();
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  return json{
      {"device",
       {{"omega_m_ghz", c.device.omega_m_ghz},
        {"kappa_c_ghz", c.device.kappa_c_ghz},
        {"g0_khz", c.device.g0_khz},
        {"quality_factor", c.device.quality_factor},
        {"wavelength_nm", c.device.wavelength_nm}}},
      {"chain",
       {{"eta_fc", c.chain.eta_fc},
        {"eta_c", c.chain.eta_c},
        {"eta_path1", c.chain.eta_path1},
        {"eta_path2", c.chain.eta_path2},
        {"eta_qe1", c.chain.eta_qe1},
        {"eta_qe2", c.chain.eta_qe2},
        {"dark_rate_hz", c.chain.dark_rate_hz},
        {"suppression_db", c.chain.suppression_db},
        {"window_write_ns", c.chain.window_write_ns},
        {"window_read_ns", c.chain.window_read_ns}}},
      {"protocol",
       {{"p_pair", c.protocol.p_pair},
        {"eps_read", c.protocol.eps_read},
        {"delta_t_ns", c.protocol.delta_t_ns},
        {"rep_period_ms", c.protocol.rep_period_ms},
        {"trials", c.protocol.trials},
        {"write_energy_fj", c.protocol.write_energy_fj},
        {"read_energy_fj", c.protocol.read_energy_fj}}},
      {"heating",
       {{"n_base", c.heating.n_base},
        {"a_heat", c.heating.a_heat},
        {"tau_rise_us", c.heating.tau_rise_us},
        {"t_decay_us", c.heating.t_decay_us},
        {"read_heat", c.heating.read_heat}}},
      {"thermometry",
       {{"pulse_energy_fj", c.thermometry.pulse_energy_fj},
        {"scattering", c.thermometry.scattering}}},
      {"seed", c.seed}};
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, e.what());
  }
  return config_from_json(j);
}

std::string canonical_text(const ExperimentConfig& c) { return config_to_json(c).dump(); }

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(canonical_text(c)); }

}  // namespace phononherald::sim
