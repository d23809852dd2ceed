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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace phononherald::sim {

/// Device parameters. Informational: they are carried through for
/// provenance but do not enter the outcome tables.
struct DeviceParams {
  double omega_m_ghz = 5.307;
  double kappa_c_ghz = 1.3;
  double g0_khz = 825.0;
  double quality_factor = 1.1e6;
  double wavelength_nm = 1556.21;
};

/// Optical chain from the cavity to the two detectors.
struct ChainParams {
  double eta_fc = 0.603;
  double eta_c = 0.5;
  double eta_path1 = 0.013 / (0.603 * 0.603 * 0.65);
  double eta_path2 = 0.019 / (0.603 * 0.603 * 0.90);
  double eta_qe1 = 0.65;
  double eta_qe2 = 0.90;
  double dark_rate_hz = 10.0;
  double suppression_db = 84.0;
  double window_write_ns = 50.0;
  double window_read_ns = 55.0;
};

struct ProtocolParams {
  double p_pair = 0.03;
  double eps_read = 0.037;
  std::vector<double> delta_t_ns = {100.0};
  double rep_period_ms = 1.0;
  std::uint64_t trials = 10'000'000;
  double write_energy_fj = 40.0;
  double read_energy_fj = 50.0;
};

struct HeatingParams {
  double n_base = 0.025;
  double a_heat = 0.3;
  double tau_rise_us = 0.37;
  double t_decay_us = 34.4;
  double read_heat = 0.0;
};

/// Alternating blue/red pulses used for sideband thermometry.
struct ThermometryParams {
  double pulse_energy_fj = 33.0;
  /// Scattering probability per pulse, for both the Stokes (pair creation)
  /// and anti-Stokes (swap) processes.
  double scattering = 0.03 * 33.0 / 40.0;
};

struct ExperimentConfig {
  DeviceParams device;
  ChainParams chain;
  ProtocolParams protocol;
  HeatingParams heating;
  ThermometryParams thermometry;
  std::uint64_t seed = 20160121;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// eta_c * eta_fc * eta_path_i * eta_qe_i for detector i in {0, 1}. The
  /// 50:50 split in front of the detectors is part of eta_path.
  double detector_efficiency(int detector) const;
  /// Mean number of pump photons per pulse that pass the filters.
  double leak_photons(double pulse_energy_fj) const;
  double dark_probability(double window_ns) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::string& path);

/// Compact, key-sorted serialization used for hashing.
std::string canonical_text(const ExperimentConfig& c);
std::uint64_t fnv1a64(const std::string& text);
std::uint64_t config_hash(const ExperimentConfig& c);

}  // namespace phononherald::sim
