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

#include "iagf/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace iagf {

std::size_t EpisodeHeader::final_goal_index() const {
  if (goal_sequence.empty()) throw std::invalid_argument("episode header has no goal sequence");
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (goals[i].id == goal_sequence.back()) return i;
  }
  throw std::invalid_argument("final goal '" + goal_sequence.back() + "' is not in the goal set");
}

int EpisodeHeader::hold_ticks() const {
  return std::max(1, static_cast<int>(std::lround(t_hold / dt)));
}

std::size_t EpisodeHeader::max_ticks() const {
  return static_cast<std::size_t>(std::lround(t_max / dt));
}

EpisodeHeader make_header(const Config& cfg, const ScenarioConfig& scenario, Method method,
                          std::string source) {
  EpisodeHeader h;
  h.method = method;
  h.scenario = scenario.scenario;
  h.seed = scenario.seed;
  h.goals = cfg.goals;
  h.goal_sequence = scenario.goal_sequence;
  h.dt = cfg.dt;
  h.r_grasp = cfg.r_grasp;
  h.t_hold = cfg.t_hold;
  h.t_max = cfg.t_max;
  h.r_align = cfg.r_align;
  h.source = std::move(source);
  return h;
}

// SharedAutonomyPipeline ----------------------------------------------------

SharedAutonomyPipeline::SharedAutonomyPipeline(const Config& cfg, Method method)
    : cfg_(cfg),
      method_(method),
      goals_(cfg.goals),
      belief_(intent::GoalBelief::uniform(cfg.goals.size())),
      history_(cfg.goals.size()),
      encoder_(intent::identity_encoder()) {
  cfg_.validate();
  step_opts_.v_max = cfg_.v_max;
  step_opts_.ik = cfg_.ik;
  state_.x = cfg_.start;
  state_.v = Vec2::Zero();
  state_.q = arm::solve_ik(cfg_.arm, cfg_.start, arm::default_seed(cfg_.arm), 1e-12, 5000, cfg_.ik);
  state_.t = 0.0;
}

TickRecord SharedAutonomyPipeline::tick(const Vec2& a_h) {
  if (!all_finite(a_h)) throw std::invalid_argument("human command is not finite");

  TickRecord rec;
  rec.index = ticks_;
  rec.t = static_cast<double>(ticks_) * cfg_.dt;
  rec.x = state_.x;
  rec.v = state_.v;
  rec.q = state_.q;
  rec.a_h = a_h;
  rec.m = arm::manipulability(cfg_.arm, state_.q);

  // Goal inference.
  const auto policies = intent::all_policies(state_.x, goals_, cfg_.policy);
  history_.push(a_h, policies);
  const auto weights = intent::likelihood(history_, a_h, policies, cfg_.gamma, encoder_);
  belief_ = intent::bayes_update(belief_.posterior, weights, cfg_.posterior_floor);
  rec.belief = belief_;

  // Robot decision and blending; NA drives the controller with a_h directly.
  rec.a_r = intent::robot_action(belief_, policies);
  if (method_ == Method::NA) {
    rec.beta = 0.0;
    rec.a_sa = a_h;
  } else {
    rec.beta = intent::beta_schedule(belief_.confidence, cfg_.beta_max);
    rec.a_sa = intent::blend(a_h, rec.a_r, rec.beta);
  }
  const Vec2 x_d = state_.x + rec.a_sa;

  const auto v_rS = singular_dir_.update(rec.m, state_.x);

  if (method_ == Method::IAGF) {
    const auto v_h = direction_of(a_h, cfg_.min_command);
    const auto v_rI = direction_of(policies[belief_.predicted], 1e-9);
    field::FieldSpec int_spec;
    if (v_rI) {
      int_spec = guidance::intgf_spec(belief_.confidence, *v_rI, cfg_.intgf, intent_mode_);
    } else {
      // Isotropic field at the predicted goal.
      int_spec = guidance::intgf_spec(belief_.confidence, Vec2::UnitX(), cfg_.intgf, intent_mode_);
      int_spec.d2 = 0.0;
    }
    intent_mode_ = int_spec.mode;
    const auto sing_spec = guidance::singf_spec(rec.m, v_rS, cfg_.singf);
    auto out = guidance::compute_guidance(v_h, int_spec, sing_spec, cfg_.alpha, state_, x_d,
                                          cfg_.gains, cfg_.force_clamp);
    rec.f_c = out.f_c;
    rec.d_h = out.d_h;
    rec.fields = std::move(out.active_fields);
  }

  state_ = impedance::step(state_, {x_d, Vec2::Zero()}, rec.f_c, cfg_.impedance, cfg_.dt,
                           cfg_.arm, step_opts_);
  ++ticks_;
  state_.t = static_cast<double>(ticks_) * cfg_.dt;
  return rec;
}

// ScenarioProgress ----------------------------------------------------------

ScenarioProgress::ScenarioProgress(std::vector<std::size_t> sequence, SwitchingLine line,
                                   double band)
    : sequence_(std::move(sequence)), line_(std::move(line)), band_(band) {
  if (sequence_.empty()) throw std::invalid_argument("goal sequence is empty");
  if (!(band_ >= 0.0)) throw std::invalid_argument("switching band must be non-negative");
}

bool ScenarioProgress::update(const Vec2& x) {
  if (at_final()) return false;
  const double s = line_.signed_distance(x);
  const bool crossed = expect_positive_ ? s > band_ : s < -band_;
  if (!crossed) return false;
  ++phase_;
  expect_positive_ = !expect_positive_;
  return true;
}

// GraspMonitor --------------------------------------------------------------

GraspMonitor::GraspMonitor(const EpisodeHeader& header)
    : goal_(header.goals.at(header.final_goal_index()).position),
      final_phase_(header.goal_sequence.size() - 1),
      r_grasp_(header.r_grasp),
      needed_(header.hold_ticks()) {}

bool GraspMonitor::update(const TickRecord& rec) {
  if (success_) return true;
  const bool inside = rec.phase == final_phase_ && (rec.x - goal_).norm() < r_grasp_;
  held_ = inside ? held_ + 1 : 0;
  success_ = held_ >= needed_;
  return success_;
}

// Episode -------------------------------------------------------------------

namespace {

std::vector<std::size_t> sequence_indices(const Config& cfg, const ScenarioConfig& sc) {
  const auto gs = cfg.goal_set();
  std::vector<std::size_t> out;
  for (const auto& id : sc.goal_sequence) out.push_back(gs.index_of(id));
  return out;
}

}  // namespace

Episode::Episode(const Config& cfg, const ScenarioConfig& scenario, Method method,
                 std::string source)
    : header_(make_header(cfg, scenario, method, std::move(source))),
      pipeline_(cfg, method),
      progress_(sequence_indices(cfg, scenario), scenario.switching_line, cfg.switching_band),
      grasp_(header_) {
  scenario.validate(pipeline_.goals());
  log_.reserve(header_.max_ticks());
}

const Vec2& Episode::target_position() const { return pipeline_.goals()[target()].position; }

const TickRecord& Episode::advance(const Vec2& a_h) {
  if (finished()) {
    if (log_.empty()) throw std::logic_error("episode finished before its first tick");
    return log_.back();
  }
  TickRecord rec = pipeline_.tick(a_h);
  rec.phase = progress_.phase();
  rec.target = progress_.target();
  grasp_.update(rec);
  log_.push_back(std::move(rec));
  progress_.update(pipeline_.state().x);
  return log_.back();
}

}  // namespace iagf
