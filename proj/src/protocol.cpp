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

#include "iagf/protocol.hpp"

#include <cmath>

#include "iagf/field.hpp"
#include "iagf/log_io.hpp"

namespace iagf::service {

using nlohmann::json;

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Hello: return "hello";
    case MessageKind::Config: return "config";
    case MessageKind::Input: return "input";
    case MessageKind::Frame: return "frame";
    case MessageKind::Event: return "event";
    case MessageKind::Bye: return "bye";
  }
  return "?";
}

MessageKind kind_from_string(std::string_view s) {
  for (auto k : {MessageKind::Hello, MessageKind::Config, MessageKind::Input, MessageKind::Frame,
                 MessageKind::Event, MessageKind::Bye}) {
    if (to_string(k) == s) return k;
  }
  throw ProtocolError("unknown message kind '" + std::string(s) + "'");
}

std::string encode(const SessionMessage& msg) {
  return json{{"kind", to_string(msg.kind)}, {"seq", msg.seq}, {"payload", msg.payload}}.dump();
}

SessionMessage decode(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message is not a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ProtocolError("missing 'kind'");
  if (!j.contains("seq") || !j["seq"].is_number_unsigned()) {
    throw ProtocolError("missing or negative 'seq'");
  }
  SessionMessage msg;
  msg.kind = kind_from_string(j["kind"].get<std::string>());
  msg.seq = j["seq"].get<std::uint64_t>();
  if (j.contains("payload")) {
    if (!j["payload"].is_object()) throw ProtocolError("'payload' must be an object");
    msg.payload = j["payload"];
  }
  return msg;
}

SessionRequest parse_config_request(const json& payload) {
  SessionRequest req;
  try {
    if (payload.contains("method")) req.method = parse_method(payload["method"].get<std::string>());
    if (payload.contains("scenario")) {
      req.scenario = parse_scenario(payload["scenario"].get<std::string>());
    }
    if (payload.contains("seed")) {
      const json& seed = payload["seed"];
      if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
        throw std::invalid_argument("seed must be a non-negative integer");
      }
      req.seed = seed.get<std::uint64_t>();
    }
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("bad config: ") + e.what());
  }
  return req;
}

InputCommand parse_input(const json& payload) {
  InputCommand in;
  try {
    in.command = vec_from_json(payload.at("command"));
    if (payload.contains("client_time")) {
      in.client_time = payload["client_time"].get<double>();
      if (!std::isfinite(in.client_time)) throw std::invalid_argument("non-finite client_time");
    }
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("bad input: ") + e.what());
  }
  in.command = clamp_norm(in.command, 1.0);
  return in;
}

SessionMessage frame_encode(std::uint64_t seq, const FrameData& f) {
  json fields = json::array();
  for (const auto& af : f.fields) {
    json jf = field_to_json(af.spec);
    jf["label"] = af.label;
    jf["d_h"] = af.d_h;
    json boundary = json::array();
    for (const auto& p : field::field_boundary(af.spec, kBoundaryPoints)) boundary.push_back(vec_to_json(p));
    jf["boundary"] = std::move(boundary);
    fields.push_back(std::move(jf));
  }
  json q = json::array();
  for (Eigen::Index i = 0; i < f.state.q.size(); ++i) q.push_back(f.state.q[i]);

  SessionMessage msg;
  msg.kind = MessageKind::Frame;
  msg.seq = seq;
  msg.payload = {{"tick", f.tick},
                 {"t", f.t},
                 {"phase", f.phase},
                 {"target", f.target},
                 {"state", {{"x", vec_to_json(f.state.x)}, {"v", vec_to_json(f.state.v)}, {"q", q}}},
                 {"belief", belief_to_json(f.belief)},
                 {"fields", std::move(fields)},
                 {"m", f.m},
                 {"f_c", vec_to_json(f.f_c)},
                 {"a_h", vec_to_json(f.a_h)},
                 {"a_sa", vec_to_json(f.a_sa)}};
  for (double v : {f.t, f.m}) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in frame");
  }
  for (Eigen::Index i = 0; i < f.state.q.size(); ++i) {
    if (!std::isfinite(f.state.q[i])) throw std::invalid_argument("non-finite joint angle in frame");
  }
  for (const auto& af : f.fields) {
    if (!std::isfinite(af.d_h)) throw std::invalid_argument("non-finite d_h in frame");
  }
  return msg;
}

FrameData frame_decode(const SessionMessage& msg) {
  if (msg.kind != MessageKind::Frame) throw ProtocolError("not a frame message");
  const json& p = msg.payload;
  FrameData f;
  try {
    f.tick = p.at("tick").get<std::size_t>();
    f.t = p.at("t").get<double>();
    f.phase = p.at("phase").get<std::size_t>();
    f.target = p.at("target").get<std::size_t>();
    f.state.x = vec_from_json(p.at("state").at("x"));
    f.state.v = vec_from_json(p.at("state").at("v"));
    const auto q = p.at("state").at("q").get<std::vector<double>>();
    f.state.q = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
    f.state.t = f.t;
    f.belief = belief_from_json(p.at("belief"));
    for (const auto& jf : p.at("fields")) {
      f.fields.push_back({jf.at("label").get<std::string>(), field_from_json(jf),
                          jf.at("d_h").get<double>()});
    }
    f.m = p.at("m").get<double>();
    f.f_c = vec_from_json(p.at("f_c"));
    f.a_h = vec_from_json(p.at("a_h"));
    f.a_sa = vec_from_json(p.at("a_sa"));
  } catch (const ProtocolError&) {
    throw;
  } catch (const std::exception& e) {
    throw ProtocolError(std::string("bad frame: ") + e.what());
  }
  return f;
}

SessionMessage make_event(std::uint64_t seq, std::string_view type, json details) {
  SessionMessage msg;
  msg.kind = MessageKind::Event;
  msg.seq = seq;
  msg.payload = details.is_object() ? std::move(details) : json::object();
  msg.payload["type"] = type;
  return msg;
}

}  // namespace iagf::service
