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

#include <chrono>
#include <mutex>
#include <optional>
#include <string>

#include "iagf/config.hpp"
#include "iagf/harness.hpp"
#include "iagf/pipeline.hpp"
#include "iagf/protocol.hpp"

namespace iagf::service {

using Clock = std::chrono::steady_clock;

inline constexpr double kFrameRate = 50.0;
inline constexpr int kTicksPerFrame = 2;
inline constexpr std::chrono::milliseconds kInputStaleAfter{300};

/// Network-free core of one live session: the latest-input slot and the
/// episode it drives. submit_input may be called from any thread.
class SessionCore {
 public:
  SessionCore(const Config& cfg, const SessionRequest& request, std::string id);

  /// Last write wins; `received` is the server-side arrival time.
  void submit_input(const InputCommand& input, Clock::time_point received);

  /// Device command in metres for a tick at `now`: the latest unit-disc
  /// command scaled by step_max, or zero once it is older than kInputStaleAfter.
  Vec2 command_at(Clock::time_point now) const;

  /// Runs kTicksPerFrame pipeline ticks (fewer if the episode ends) and
  /// returns what the client should draw.
  FrameData advance_frame(Clock::time_point now);

  bool finished() const { return episode_.finished(); }
  bool success() const { return episode_.success(); }
  const Episode& episode() const { return episode_; }
  const std::string& id() const { return id_; }
  const ScenarioConfig& scenario() const { return scenario_; }

  /// Metrics over the log so far; nullopt before the first tick.
  std::optional<EpisodeMetrics> metrics() const;

 private:
  std::string id_;
  ScenarioConfig scenario_;
  double step_max_;
  arm::ArmGeometry arm_;
  Episode episode_;

  mutable std::mutex input_mutex_;
  std::optional<std::pair<Vec2, Clock::time_point>> latest_;
};

}  // namespace iagf::service
