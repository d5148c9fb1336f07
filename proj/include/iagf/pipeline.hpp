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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iagf/config.hpp"
#include "iagf/guidance.hpp"
#include "iagf/impedance.hpp"
#include "iagf/intent.hpp"

namespace iagf {

/// Everything computed in one control tick, evaluated at the pre-step state.
struct TickRecord {
  std::size_t index = 0;
  double t = 0.0;
  std::size_t phase = 0;   // position in the goal sequence
  std::size_t target = 0;  // goal index the operator is heading to
  Vec2 a_h = Vec2::Zero();
  Vec2 a_r = Vec2::Zero();
  Vec2 a_sa = Vec2::Zero();
  Vec2 f_c = Vec2::Zero();
  double beta = 0.0;
  intent::GoalBelief belief;
  double m = 0.0;
  arm::JointConfig q;
  Vec2 x = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  double d_h = 0.0;
  std::vector<guidance::ActiveField> fields;
};

/// Episode-level facts needed to re-derive metrics from a log alone.
struct EpisodeHeader {
  int version = 1;
  Method method = Method::NA;
  Scenario scenario = Scenario::S1;
  std::uint64_t seed = 0;
  std::vector<intent::Goal> goals;
  std::vector<std::string> goal_sequence;
  double dt = 0.01;
  double r_grasp = 0.02;
  double t_hold = 0.5;
  double t_max = 60.0;
  double r_align = 0.05;
  std::string source = "batch";  // "batch" or "session"

  std::size_t final_goal_index() const;
  int hold_ticks() const;
  std::size_t max_ticks() const;
};

/// The perception→inference→blend→guidance→impedance chain for one control
/// tick. Batch episodes and live sessions both drive this class.
class SharedAutonomyPipeline {
 public:
  SharedAutonomyPipeline(const Config& cfg, Method method);

  /// Runs one tick with human command a_h (m of desired displacement) and
  /// advances the robot by dt. Returns the tick's record (phase/target unset).
  TickRecord tick(const Vec2& a_h);

  const impedance::RobotState& state() const { return state_; }
  const intent::GoalBelief& belief() const { return belief_; }
  const intent::GoalSet& goals() const { return goals_; }
  Method method() const { return method_; }
  std::size_t ticks() const { return ticks_; }

  void set_encoder(intent::Encoder encoder) { encoder_ = std::move(encoder); }

 private:
  Config cfg_;
  Method method_;
  intent::GoalSet goals_;
  impedance::StepOptions step_opts_;
  impedance::RobotState state_;
  intent::GoalBelief belief_;
  intent::CommandHistory history_;
  intent::Encoder encoder_;
  guidance::SingularityDirectionTracker singular_dir_;
  std::optional<field::FieldMode> intent_mode_;
  std::size_t ticks_ = 0;
};

/// Goal-sequence progress driven by crossings of the switching line. The
/// first counted crossing goes from the negative to the positive side;
/// each later one reverses direction.
class ScenarioProgress {
 public:
  ScenarioProgress(std::vector<std::size_t> sequence, SwitchingLine line, double band);

  /// Feeds the newest end-effector position; returns true on a switch.
  bool update(const Vec2& x);

  std::size_t phase() const { return phase_; }
  std::size_t target() const { return sequence_[phase_]; }
  bool at_final() const { return phase_ + 1 == sequence_.size(); }
  std::size_t switches() const { return phase_; }

 private:
  std::vector<std::size_t> sequence_;
  SwitchingLine line_;
  double band_;
  std::size_t phase_ = 0;
  bool expect_positive_ = true;
};

/// True once the end-effector has stayed within r_grasp of the final goal,
/// in the final phase, for hold_ticks consecutive ticks.
class GraspMonitor {
 public:
  GraspMonitor(const EpisodeHeader& header);
  bool update(const TickRecord& rec);
  bool success() const { return success_; }

 private:
  Vec2 goal_;
  std::size_t final_phase_;
  double r_grasp_;
  int needed_;
  int held_ = 0;
  bool success_ = false;
};

/// A scenario episode around one pipeline: progress tracking, grasp
/// detection, timeout and the tick log.
class Episode {
 public:
  Episode(const Config& cfg, const ScenarioConfig& scenario, Method method,
          std::string source = "batch");

  const impedance::RobotState& state() const { return pipeline_.state(); }
  const intent::GoalBelief& belief() const { return pipeline_.belief(); }
  std::size_t target() const { return progress_.target(); }
  const Vec2& target_position() const;
  std::size_t phase() const { return progress_.phase(); }

  /// One control tick; a no-op once the episode is finished.
  const TickRecord& advance(const Vec2& a_h);

  bool finished() const { return success() || timed_out(); }
  bool success() const { return grasp_.success(); }
  bool timed_out() const { return log_.size() >= header_.max_ticks(); }

  const EpisodeHeader& header() const { return header_; }
  const std::vector<TickRecord>& log() const { return log_; }
  SharedAutonomyPipeline& pipeline() { return pipeline_; }

 private:
  EpisodeHeader header_;
  SharedAutonomyPipeline pipeline_;
  ScenarioProgress progress_;
  GraspMonitor grasp_;
  std::vector<TickRecord> log_;
};

EpisodeHeader make_header(const Config& cfg, const ScenarioConfig& scenario, Method method,
                          std::string source);

}  // namespace iagf
