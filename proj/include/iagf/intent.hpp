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

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "iagf/types.hpp"

namespace iagf::intent {

struct Goal {
  std::string id;
  Vec2 position = Vec2::Zero();
};

/// Candidate goals. At least two, with distinct ids.
class GoalSet {
 public:
  explicit GoalSet(std::vector<Goal> goals);

  std::size_t size() const { return goals_.size(); }
  const Goal& operator[](std::size_t i) const { return goals_[i]; }
  const std::vector<Goal>& goals() const { return goals_; }
  /// Throws std::out_of_range for an unknown id.
  std::size_t index_of(std::string_view id) const;

 private:
  std::vector<Goal> goals_;
};

struct GoalBelief {
  std::vector<double> posterior;
  double confidence = 0.0;    // p(g*) − p(runner-up)
  std::size_t predicted = 0;  // g*, lowest index on ties

  static GoalBelief uniform(std::size_t n_goals);
};

/// Fills confidence and predicted from the posterior.
void summarize(GoalBelief& belief);

inline constexpr std::size_t kHistoryLength = 6;

/// Last six human commands and, per goal, the last six policy actions.
/// Zero-padded until filled.
class CommandHistory {
 public:
  explicit CommandHistory(std::size_t n_goals);

  void push(const Vec2& human, std::span<const Vec2> policy_actions);

  std::size_t n_goals() const { return policy_.size(); }
  std::size_t filled() const { return filled_; }
  /// Oldest-first flattening: [x₀, y₀, …, x₅, y₅].
  Eigen::VectorXd human_sequence() const;
  Eigen::VectorXd policy_sequence(std::size_t goal) const;

 private:
  using Ring = std::array<Vec2, kHistoryLength>;
  Eigen::VectorXd flatten(const Ring& ring) const;

  Ring human_{};
  std::vector<Ring> policy_;
  std::size_t head_ = 0;  // next write slot
  std::size_t filled_ = 0;
};

/// Maps a flattened command sequence to an embedding.
using Encoder = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
Encoder identity_encoder();

struct PolicyParams {
  double gain = 0.1;        // fraction of the remaining distance commanded per tick
  double step_max = 0.01;   // m per tick
};

/// Scripted goal-directed policy: gain·(goal − x), norm-clamped to step_max.
Vec2 goal_policy(std::size_t goal, const Vec2& x, const GoalSet& goals, const PolicyParams& p);
/// Throws std::out_of_range for an unknown id.
Vec2 goal_policy(std::string_view goal_id, const Vec2& x, const GoalSet& goals,
                 const PolicyParams& p);

std::vector<Vec2> all_policies(const Vec2& x, const GoalSet& goals, const PolicyParams& p);

/// Cosine similarity, 0 when either norm is below 1e−9.
double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double sim_dir(const Vec2& a_h, const Vec2& a_g);
double sim_enc(const CommandHistory& hist, std::size_t goal, const Encoder& encoder);

/// Per-goal exp(γ·sim_enc + (1 − γ)·sim_dir), unnormalized. `policy_actions`
/// are the goal policies evaluated at the current state.
std::vector<double> likelihood(const CommandHistory& hist, const Vec2& a_h,
                               std::span<const Vec2> policy_actions, double gamma,
                               const Encoder& encoder);

inline constexpr double kPosteriorFloor = 1e-4;

/// posterior ∝ prior ⊙ weights, floored at `floor` and renormalized.
GoalBelief bayes_update(std::span<const double> prior, std::span<const double> weights,
                        double floor = kPosteriorFloor);

/// Σ_g P(g)·π_g.
Vec2 robot_action(const GoalBelief& belief, std::span<const Vec2> policy_actions);
Vec2 robot_action(const GoalBelief& belief, const Vec2& x, const GoalSet& goals,
                  const PolicyParams& p);

/// β_max·clamp(C, 0, 1).
double beta_schedule(double confidence, double beta_max = 0.6);

/// (1 − β)·a_h + β·a_r; throws std::invalid_argument for β ∉ [0, 1].
Vec2 blend(const Vec2& a_h, const Vec2& a_r, double beta);

}  // namespace iagf::intent
