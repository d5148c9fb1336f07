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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "iagf/pipeline.hpp"

namespace iagf::service {

inline constexpr int kProtocolVersion = 1;
inline constexpr int kBoundaryPoints = 64;

enum class MessageKind { Hello, Config, Input, Frame, Event, Bye };

std::string_view to_string(MessageKind kind);
MessageKind kind_from_string(std::string_view s);

/// Raised for anything a peer sent that does not follow the protocol.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Envelope for every message in either direction.
struct SessionMessage {
  MessageKind kind = MessageKind::Hello;
  std::uint64_t seq = 0;
  nlohmann::json payload = nlohmann::json::object();
};

std::string encode(const SessionMessage& msg);
/// Throws ProtocolError on malformed JSON or envelope.
SessionMessage decode(std::string_view text);

/// Client → server handshake choice.
struct SessionRequest {
  Method method = Method::IAGF;
  Scenario scenario = Scenario::S1;
  std::uint64_t seed = 0;
};

SessionRequest parse_config_request(const nlohmann::json& payload);

/// Unit-disc device command with the client's own timestamp (s).
struct InputCommand {
  Vec2 command = Vec2::Zero();
  double client_time = 0.0;
};

/// Rejects non-finite values; commands outside the unit disc are clamped onto it.
InputCommand parse_input(const nlohmann::json& payload);

/// Everything the client needs to draw one frame.
struct FrameData {
  std::size_t tick = 0;
  double t = 0.0;
  std::size_t phase = 0;
  std::size_t target = 0;
  impedance::RobotState state;
  intent::GoalBelief belief;
  std::vector<guidance::ActiveField> fields;
  double m = 0.0;
  Vec2 f_c = Vec2::Zero();
  Vec2 a_h = Vec2::Zero();
  Vec2 a_sa = Vec2::Zero();
};

/// Frame message; each field carries a kBoundaryPoints polyline relative to
/// the end-effector. Throws std::invalid_argument for non-finite values.
SessionMessage frame_encode(std::uint64_t seq, const FrameData& frame);
/// Inverse of frame_encode (boundaries are not read back).
FrameData frame_decode(const SessionMessage& msg);

SessionMessage make_event(std::uint64_t seq, std::string_view type, nlohmann::json details = {});

}  // namespace iagf::service
