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

#include "iagf/session.hpp"

namespace iagf::service {

SessionCore::SessionCore(const Config& cfg, const SessionRequest& request, std::string id)
    : id_(std::move(id)),
      scenario_(make_scenario(cfg, request.scenario, request.seed)),
      step_max_(cfg.policy.step_max),
      arm_(cfg.arm),
      episode_(cfg, scenario_, request.method, "session") {}

void SessionCore::submit_input(const InputCommand& input, Clock::time_point received) {
  std::lock_guard lock(input_mutex_);
  latest_ = std::make_pair(clamp_norm(input.command, 1.0), received);
}

Vec2 SessionCore::command_at(Clock::time_point now) const {
  std::lock_guard lock(input_mutex_);
  if (!latest_ || now - latest_->second > kInputStaleAfter) return Vec2::Zero();
  return latest_->first * step_max_;
}

FrameData SessionCore::advance_frame(Clock::time_point now) {
  const Vec2 a_h = command_at(now);
  for (int i = 0; i < kTicksPerFrame && !episode_.finished(); ++i) episode_.advance(a_h);

  FrameData f;
  f.tick = episode_.log().size();
  f.state = episode_.state();
  f.t = f.state.t;
  f.phase = episode_.phase();
  f.target = episode_.target();
  f.belief = episode_.belief();
  if (!episode_.log().empty()) {
    const auto& last = episode_.log().back();
    f.fields = last.fields;
    f.f_c = last.f_c;
    f.a_h = last.a_h;
    f.a_sa = last.a_sa;
  }
  f.m = arm::manipulability(arm_, f.state.q);
  return f;
}

std::optional<EpisodeMetrics> SessionCore::metrics() const {
  if (episode_.log().empty()) return std::nullopt;
  return compute_metrics(episode_.header(), episode_.log());
}

}  // namespace iagf::service
