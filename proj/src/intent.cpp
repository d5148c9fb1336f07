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

#include "iagf/intent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace iagf::intent {

GoalSet::GoalSet(std::vector<Goal> goals) : goals_(std::move(goals)) {
  if (goals_.size() < 2) throw std::invalid_argument("goal set needs at least two goals");
  std::set<std::string> ids;
  for (const Goal& g : goals_) {
    if (g.id.empty()) throw std::invalid_argument("goal id must not be empty");
    if (!all_finite(g.position)) throw std::invalid_argument("goal position is not finite");
    if (!ids.insert(g.id).second) throw std::invalid_argument("duplicate goal id '" + g.id + "'");
  }
}

std::size_t GoalSet::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    if (goals_[i].id == id) return i;
  }
  throw std::out_of_range("unknown goal id '" + std::string(id) + "'");
}

GoalBelief GoalBelief::uniform(std::size_t n_goals) {
  if (n_goals == 0) throw std::invalid_argument("belief over zero goals");
  GoalBelief b;
  b.posterior.assign(n_goals, 1.0 / static_cast<double>(n_goals));
  summarize(b);
  return b;
}

void summarize(GoalBelief& belief) {
  const auto& p = belief.posterior;
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  double runner_up = 0.0;
  bool have_runner_up = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == best) continue;
    if (!have_runner_up || p[i] > runner_up) runner_up = p[i];
    have_runner_up = true;
  }
  belief.predicted = best;
  belief.confidence = std::clamp(p[best] - runner_up, 0.0, 1.0);
}

CommandHistory::CommandHistory(std::size_t n_goals) : policy_(n_goals) {
  for (auto& ring : policy_) ring.fill(Vec2::Zero());
  human_.fill(Vec2::Zero());
}

void CommandHistory::push(const Vec2& human, std::span<const Vec2> policy_actions) {
  if (policy_actions.size() != policy_.size()) {
    throw std::invalid_argument("history expects one policy action per goal");
  }
  human_[head_] = human;
  for (std::size_t g = 0; g < policy_.size(); ++g) policy_[g][head_] = policy_actions[g];
  head_ = (head_ + 1) % kHistoryLength;
  filled_ = std::min(filled_ + 1, kHistoryLength);
}

Eigen::VectorXd CommandHistory::flatten(const Ring& ring) const {
  Eigen::VectorXd out(2 * kHistoryLength);
  // head_ is the oldest slot once the ring wraps; unfilled slots are zero.
  for (std::size_t k = 0; k < kHistoryLength; ++k) {
    const Vec2& v = ring[(head_ + k) % kHistoryLength];
    out(2 * k) = v.x();
    out(2 * k + 1) = v.y();
  }
  return out;
}

Eigen::VectorXd CommandHistory::human_sequence() const { return flatten(human_); }

Eigen::VectorXd CommandHistory::policy_sequence(std::size_t goal) const {
  return flatten(policy_.at(goal));
}

Encoder identity_encoder() {
  return [](const Eigen::VectorXd& seq) { return seq; };
}

Vec2 goal_policy(std::size_t goal, const Vec2& x, const GoalSet& goals, const PolicyParams& p) {
  if (goal >= goals.size()) throw std::out_of_range("goal index out of range");
  return clamp_norm(p.gain * (goals[goal].position - x), p.step_max);
}

Vec2 goal_policy(std::string_view goal_id, const Vec2& x, const GoalSet& goals,
                 const PolicyParams& p) {
  return goal_policy(goals.index_of(goal_id), x, goals, p);
}

std::vector<Vec2> all_policies(const Vec2& x, const GoalSet& goals, const PolicyParams& p) {
  std::vector<Vec2> out;
  out.reserve(goals.size());
  for (std::size_t g = 0; g < goals.size(); ++g) out.push_back(goal_policy(g, x, goals, p));
  return out;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < 1e-9 || nb < 1e-9) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double sim_dir(const Vec2& a_h, const Vec2& a_g) {
  const double na = a_h.norm();
  const double ng = a_g.norm();
  if (na < 1e-9 || ng < 1e-9) return 0.0;
  return std::clamp(a_h.dot(a_g) / (na * ng), -1.0, 1.0);
}

double sim_enc(const CommandHistory& hist, std::size_t goal, const Encoder& encoder) {
  return cosine(encoder(hist.human_sequence()), encoder(hist.policy_sequence(goal)));
}

std::vector<double> likelihood(const CommandHistory& hist, const Vec2& a_h,
                               std::span<const Vec2> policy_actions, double gamma,
                               const Encoder& encoder) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (policy_actions.size() != hist.n_goals()) {
    throw std::invalid_argument("likelihood expects one policy action per goal");
  }
  std::vector<double> w(policy_actions.size());
  for (std::size_t g = 0; g < w.size(); ++g) {
    const double score =
        gamma * sim_enc(hist, g, encoder) + (1.0 - gamma) * sim_dir(a_h, policy_actions[g]);
    w[g] = std::exp(score);
  }
  return w;
}

GoalBelief bayes_update(std::span<const double> prior, std::span<const double> weights,
                        double floor) {
  if (prior.size() != weights.size() || prior.empty()) {
    throw std::invalid_argument("prior and likelihood sizes differ");
  }
  GoalBelief out;
  out.posterior.resize(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("likelihood weights must be positive and finite");
    }
    out.posterior[i] = prior[i] * weights[i];
  }
  double total = std::accumulate(out.posterior.begin(), out.posterior.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("posterior cannot be normalized");
  }
  for (double& p : out.posterior) p = std::max(p / total, floor);
  total = std::accumulate(out.posterior.begin(), out.posterior.end(), 0.0);
  for (double& p : out.posterior) p /= total;
  summarize(out);
  return out;
}

Vec2 robot_action(const GoalBelief& belief, std::span<const Vec2> policy_actions) {
  if (belief.posterior.size() != policy_actions.size()) {
    throw std::invalid_argument("belief and policy library sizes differ");
  }
  Vec2 a = Vec2::Zero();
  for (std::size_t g = 0; g < policy_actions.size(); ++g) {
    a += belief.posterior[g] * policy_actions[g];
  }
  return a;
}

Vec2 robot_action(const GoalBelief& belief, const Vec2& x, const GoalSet& goals,
                  const PolicyParams& p) {
  const auto actions = all_policies(x, goals, p);
  return robot_action(belief, actions);
}

double beta_schedule(double confidence, double beta_max) {
  return beta_max * std::clamp(confidence, 0.0, 1.0);
}

Vec2 blend(const Vec2& a_h, const Vec2& a_r, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  if (beta == 0.0) return a_h;
  if (beta == 1.0) return a_r;
  return a_h + beta * (a_r - a_h);
}

}  // namespace iagf::intent
