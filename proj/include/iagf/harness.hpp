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
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "iagf/config.hpp"
#include "iagf/pipeline.hpp"

namespace iagf {

// Scripted operator ----------------------------------------------------------

/// Noisy proportional operator: gain·(target − x) clamped to step_max, with
/// the bearing rotated by a seeded Gaussian angle each tick.
class ScriptedOperator {
 public:
  ScriptedOperator(double gain, double step_max, double noise_deg, std::uint64_t seed);
  ScriptedOperator(const Config& cfg, const ScenarioConfig& scenario);

  Vec2 command(const Vec2& x, const Vec2& target);

 private:
  double gain_;
  double step_max_;
  double noise_rad_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
};

// Metrics --------------------------------------------------------------------

struct EpisodeMetrics {
  bool success = false;
  double completion_time = 0.0;  // s; full episode length on failure
  double disagreement = 0.0;
  double alignment_time = 0.0;  // s
  double min_manipulability = 0.0;
  std::size_t ticks = 0;
  std::size_t switches = 0;

  bool operator==(const EpisodeMetrics&) const = default;
};

/// Index of the tick at which the grasp predicate first holds, if any.
std::optional<std::size_t> success_tick(const EpisodeHeader& header,
                                        const std::vector<TickRecord>& log);

/// 1 − mean cos(a_h, a_r) over ticks where both norms are ≥ 1e−9.
/// Throws std::invalid_argument on an empty log.
double metric_disagreement(const std::vector<TickRecord>& log);

/// dt × number of ticks (up to and including `last_tick`) with ‖x − goal‖ < r_align.
double metric_alignment_time(const std::vector<TickRecord>& log, const Vec2& goal, double r_align,
                             double dt, std::optional<std::size_t> last_tick = std::nullopt);

/// Lowest logged m(q). Throws std::invalid_argument on an empty log.
double metric_min_manipulability(const std::vector<TickRecord>& log);

/// Re-derives every metric from a header and its tick log.
EpisodeMetrics compute_metrics(const EpisodeHeader& header, const std::vector<TickRecord>& log);

/// JSON object text with every metric; doubles round-trip exactly.
std::string metrics_json(const EpisodeMetrics& m);
EpisodeMetrics metrics_from_json(const std::string& text);

// Episodes -------------------------------------------------------------------

struct EpisodeResult {
  EpisodeHeader header;
  EpisodeMetrics metrics;
  std::vector<TickRecord> log;
};

/// Closed-loop run of one scenario episode with the scripted operator.
EpisodeResult run_episode(const Config& cfg, const ScenarioConfig& scenario, Method method);

// Suite ----------------------------------------------------------------------

struct SuiteEpisode {
  Scenario scenario = Scenario::S1;
  Method method = Method::NA;
  std::uint64_t seed = 0;
  std::vector<std::string> goal_sequence;
  EpisodeMetrics metrics;
  std::string error;  // non-empty when the episode threw
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (0 for a single value)
};

Stat summarize(const std::vector<double>& values);

struct SuiteCell {
  Scenario scenario = Scenario::S1;
  Method method = Method::NA;
  int episodes = 0;
  int errors = 0;
  double success_rate = 0.0;
  Stat completion_time;
  Stat disagreement;
  Stat alignment_time;
  Stat min_manipulability;
};

struct SuiteResult {
  std::vector<SuiteEpisode> episodes;
  std::vector<SuiteCell> cells;

  const SuiteCell& cell(Scenario s, Method m) const;
};

/// Runs scenarios × methods × seeds from cfg.suite. Episode failures are
/// recorded per episode and never abort the suite.
SuiteResult run_suite(const Config& cfg);

/// Aggregates episodes into one row per (scenario, method), in first-seen order.
std::vector<SuiteCell> aggregate(const std::vector<SuiteEpisode>& episodes);

void write_suite_csv(const SuiteResult& result, std::ostream& cells_out,
                     std::ostream& episodes_out);
std::string suite_json(const SuiteResult& result);
/// Writes results.csv, episodes.csv and results.json into dir.
void write_suite(const SuiteResult& result, const std::filesystem::path& dir);

}  // namespace iagf
