// Copyright 2026 The iagf-sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iagf/arm.hpp"
#include "iagf/field.hpp"
#include "iagf/guidance.hpp"
#include "iagf/impedance.hpp"
#include "iagf/intent.hpp"
#include "iagf/types.hpp"

namespace iagf {

enum class Scenario { S1, S2, S3 };
enum class Method { NA, SA, IAGF };

std::string_view to_string(Scenario s);
std::string_view to_string(Method m);
/// "s1" / "s2" / "s3" (case-insensitive).
Scenario parse_scenario(std::string_view s);
/// "na" / "sa" / "iagf" (also "iagf-sa"), case-insensitive.
Method parse_method(std::string_view s);

/// Oriented line; the positive side is where normal points.
struct SwitchingLine {
  Vec2 point = Vec2(0.2, 0.0);
  Vec2 normal = Vec2::UnitX();

  double signed_distance(const Vec2& x) const;
};

struct SuiteSpec {
  std::vector<Scenario> scenarios{Scenario::S1, Scenario::S2, Scenario::S3};
  std::vector<Method> methods{Method::NA, Method::SA, Method::IAGF};
  int seeds = 50;
  std::uint64_t seed_start = 0;
  int threads = 0;  // 0 = hardware concurrency
};

/// Every tunable of the simulator. Defaults form the reference configuration.
struct Config {
  // arm
  arm::ArmGeometry arm = arm::ArmGeometry::default_two_link();
  arm::IkOptions ik;

  // impedance
  impedance::ImpedanceParams impedance;
  double dt = 0.01;
  double v_max = 0.5;

  // guidance
  field::GuidanceGains gains;
  guidance::IntGFConfig intgf;
  guidance::SinGFConfig singf;
  double alpha = 4.0;
  double force_clamp = 30.0;
  double min_command = 1e-4;  // below this ‖a_h‖ the human direction is undefined

  // inference and blending
  double gamma = 0.5;
  double beta_max = 0.6;
  double posterior_floor = intent::kPosteriorFloor;
  intent::PolicyParams policy;

  // workspace and scenarios
  std::vector<intent::Goal> goals{{"A", Vec2(0.50, 0.52)},
                                  {"B", Vec2(-0.05, 0.72)},
                                  {"C", Vec2(-0.50, 0.52)}};
  Vec2 start = Vec2(0.0, 0.35);
  SwitchingLine switching_line;
  double switching_band = 0.005;  // m past the line before a crossing counts
  std::map<Scenario, std::vector<std::vector<std::string>>> tasks{
      {Scenario::S1, {{"A"}, {"B"}, {"C"}}},
      {Scenario::S2, {{"A", "C"}, {"A", "B"}}},
      {Scenario::S3, {{"A", "B", "A"}, {"A", "C", "A"}}},
  };

  // scripted operator
  double operator_gain = 0.1;
  double noise_deg = 10.0;

  // episode
  double r_grasp = 0.02;
  double t_hold = 0.5;
  double t_max = 60.0;
  double r_align = 0.05;

  SuiteSpec suite;

  intent::GoalSet goal_set() const { return intent::GoalSet(goals); }
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Parses the INI-style key/value format documented in config/default.ini.
/// Keys that are absent keep their defaults; unknown keys are rejected.
Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// One concrete episode setup.
struct ScenarioConfig {
  Scenario scenario = Scenario::S1;
  std::vector<std::string> goal_sequence;
  SwitchingLine switching_line;
  std::uint64_t seed = 0;
  double noise_deg = 10.0;

  /// Checks goal count per scenario (1 / 2 / A→B→A) and that the ids exist.
  void validate(const intent::GoalSet& goals) const;
};

/// Picks the task tasks[scenario][seed % n] and fills the remaining fields
/// from the config.
ScenarioConfig make_scenario(const Config& cfg, Scenario scenario, std::uint64_t seed);

}  // namespace iagf
