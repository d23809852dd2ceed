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

#include <gtest/gtest.h>

#include "phononherald/errors.hpp"

namespace phononherald::sim {
namespace {

using nlohmann::json;

std::string config_error_path(const json& j) {
  try {
    config_from_json(j).validate();
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(ExperimentConfig{}.validate()); }

TEST(Config, DetectionEfficienciesFromOutputRatios) {
  const ExperimentConfig c;
  // Quoted as 1.1 % and 1.6 %.
  EXPECT_NEAR(c.detector_efficiency(0), 0.011, 5e-4);
  EXPECT_NEAR(c.detector_efficiency(1), 0.016, 5e-4);
  EXPECT_NEAR(c.chain.eta_fc * c.chain.eta_fc * c.chain.eta_path1 * c.chain.eta_qe1, 0.013, 1e-12);
  EXPECT_NEAR(c.chain.eta_fc * c.chain.eta_fc * c.chain.eta_path2 * c.chain.eta_qe2, 0.019, 1e-12);
}

TEST(Config, LeakIsSmallFractionOfWriteDetections) {
  const ExperimentConfig c;
  const double eta = c.detector_efficiency(0) + c.detector_efficiency(1);
  const double leak_clicks = eta * c.leak_photons(c.protocol.write_energy_fj);
  const double write_clicks = eta * c.protocol.p_pair * (1 + c.heating.n_base);
  EXPECT_NEAR(leak_clicks / write_clicks, 1.0 / 25, 0.01);
}

TEST(Config, DarkProbabilityPerWindow) {
  const ExperimentConfig c;
  EXPECT_NEAR(c.dark_probability(55), 10 * 55e-9, 1e-6 * 10 * 55e-9);
  EXPECT_EQ(ExperimentConfig{}.dark_probability(0), 0);
}

TEST(Config, JsonRoundTripKeepsHash) {
  ExperimentConfig c;
  c.protocol.delta_t_ns = {100, 400, 1000};
  c.heating.a_heat = 0.123;
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(canonical_text(back), canonical_text(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(Config, HashTracksEveryField) {
  const ExperimentConfig base;
  auto c = base;
  c.seed += 1;
  EXPECT_NE(config_hash(c), config_hash(base));
  c = base;
  c.chain.window_read_ns = 30;
  EXPECT_NE(config_hash(c), config_hash(base));
}

TEST(Config, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Config, PartialJsonKeepsDefaults) {
  const auto c = config_from_json(json{{"heating", {{"a_heat", 0.5}}}});
  EXPECT_DOUBLE_EQ(c.heating.a_heat, 0.5);
  EXPECT_DOUBLE_EQ(c.protocol.p_pair, ExperimentConfig{}.protocol.p_pair);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_error_path({{"protocol", {{"p_pair", 1.5}}}}), "protocol.p_pair");
  EXPECT_EQ(config_error_path({{"chain", {{"eta_qe2", -0.1}}}}), "chain.eta_qe2");
  EXPECT_EQ(config_error_path({{"protocol", {{"delta_t_ns", {100, 50}}}}}), "protocol.delta_t_ns[1]");
  EXPECT_EQ(config_error_path({{"heating", {{"a_heat", 11}}}}), "heating.a_heat");
  EXPECT_EQ(config_error_path({{"protocol", {{"delta_t_ns", json::array()}}}}), "protocol.delta_t_ns");
}

TEST(Config, RejectsUnknownKeysAndWrongTypes) {
  EXPECT_EQ(config_error_path({{"chain", {{"eta_fiber", 0.5}}}}), "chain.eta_fiber");
  EXPECT_EQ(config_error_path({{"bogus", 1}}), "bogus");
  EXPECT_EQ(config_error_path({{"protocol", {{"trials", "many"}}}}), "protocol.trials");
}

TEST(Config, RejectsTruncationUnsafePairRate) {
  EXPECT_EQ(config_error_path({{"protocol", {{"p_pair", 0.35}}}}), "protocol.p_pair");
}

TEST(Config, RejectsReadWindowBeyondRepetitionPeriod) {
  EXPECT_EQ(config_error_path({{"protocol", {{"delta_t_ns", {2e6}}}}}), "protocol.delta_t_ns");
}

TEST(Config, LoadMissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

}  // namespace
}  // namespace phononherald::sim
