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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "iagf/pipeline.hpp"

namespace iagf {

inline constexpr int kLogVersion = 1;

/// A parsed JSONL episode log.
struct EpisodeLog {
  EpisodeHeader header;
  std::vector<TickRecord> ticks;
};

nlohmann::json vec_to_json(const Vec2& v);
Vec2 vec_from_json(const nlohmann::json& j);

/// {mode, d1, d2, v_r:[x,y]}
nlohmann::json field_to_json(const field::FieldSpec& spec);
field::FieldSpec field_from_json(const nlohmann::json& j);

nlohmann::json belief_to_json(const intent::GoalBelief& belief);
intent::GoalBelief belief_from_json(const nlohmann::json& j);

nlohmann::json header_to_json(const EpisodeHeader& header);
EpisodeHeader header_from_json(const nlohmann::json& j);

nlohmann::json tick_to_json(const TickRecord& rec);
TickRecord tick_from_json(const nlohmann::json& j);

/// One header line followed by one line per tick. Throws std::invalid_argument
/// if any number is not finite.
void write_log(std::ostream& out, const EpisodeHeader& header, const std::vector<TickRecord>& log);
void write_log(const std::filesystem::path& path, const EpisodeHeader& header,
               const std::vector<TickRecord>& log);

/// Throws std::runtime_error with the offending line number on malformed input.
EpisodeLog read_log(std::istream& in);
EpisodeLog read_log(const std::filesystem::path& path);

/// Conventional file name: <scenario>_<method>_seed<N>.jsonl
std::string log_file_name(const EpisodeHeader& header);

}  // namespace iagf
