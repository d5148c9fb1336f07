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

#include "iagf/log_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace iagf {

using nlohmann::json;

namespace {

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite value in ") + what);
  return v;
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw std::invalid_argument(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

double num(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw std::invalid_argument(std::string("'") + key + "' is not a number");
  return finite(v.get<double>(), key);
}

}  // namespace

json vec_to_json(const Vec2& v) {
  return json::array({finite(v.x(), "vector"), finite(v.y(), "vector")});
}

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument("expected a 2-element numeric array");
  }
  return {finite(j[0].get<double>(), "vector"), finite(j[1].get<double>(), "vector")};
}

json field_to_json(const field::FieldSpec& spec) {
  return {{"mode", field::to_string(spec.mode)},
          {"d1", finite(spec.d1, "d1")},
          {"d2", finite(spec.d2, "d2")},
          {"v_r", vec_to_json(spec.v_r)}};
}

field::FieldSpec field_from_json(const json& j) {
  field::FieldSpec spec;
  spec.mode = field::mode_from_string(require(j, "mode").get<std::string>());
  spec.d1 = num(j, "d1");
  spec.d2 = num(j, "d2");
  spec.v_r = vec_from_json(require(j, "v_r"));
  return spec;
}

json belief_to_json(const intent::GoalBelief& belief) {
  json p = json::array();
  for (double v : belief.posterior) p.push_back(finite(v, "posterior"));
  return {{"posterior", std::move(p)},
          {"confidence", finite(belief.confidence, "confidence")},
          {"predicted", belief.predicted}};
}

intent::GoalBelief belief_from_json(const json& j) {
  intent::GoalBelief b;
  for (const auto& v : require(j, "posterior")) b.posterior.push_back(finite(v.get<double>(), "posterior"));
  b.confidence = num(j, "confidence");
  b.predicted = require(j, "predicted").get<std::size_t>();
  return b;
}

json header_to_json(const EpisodeHeader& h) {
  json goals = json::array();
  for (const auto& g : h.goals) goals.push_back({{"id", g.id}, {"position", vec_to_json(g.position)}});
  return {{"record", "header"},
          {"version", h.version},
          {"method", to_string(h.method)},
          {"scenario", to_string(h.scenario)},
          {"seed", h.seed},
          {"goals", std::move(goals)},
          {"goal_sequence", h.goal_sequence},
          {"dt", finite(h.dt, "dt")},
          {"r_grasp", finite(h.r_grasp, "r_grasp")},
          {"t_hold", finite(h.t_hold, "t_hold")},
          {"t_max", finite(h.t_max, "t_max")},
          {"r_align", finite(h.r_align, "r_align")},
          {"source", h.source}};
}

EpisodeHeader header_from_json(const json& j) {
  if (require(j, "record") != "header") throw std::invalid_argument("first record is not a header");
  EpisodeHeader h;
  h.version = require(j, "version").get<int>();
  if (h.version != kLogVersion) {
    throw std::invalid_argument("unsupported log version " + std::to_string(h.version));
  }
  h.method = parse_method(require(j, "method").get<std::string>());
  h.scenario = parse_scenario(require(j, "scenario").get<std::string>());
  h.seed = require(j, "seed").get<std::uint64_t>();
  for (const auto& g : require(j, "goals")) {
    h.goals.push_back({require(g, "id").get<std::string>(), vec_from_json(require(g, "position"))});
  }
  h.goal_sequence = require(j, "goal_sequence").get<std::vector<std::string>>();
  h.dt = num(j, "dt");
  h.r_grasp = num(j, "r_grasp");
  h.t_hold = num(j, "t_hold");
  h.t_max = num(j, "t_max");
  h.r_align = num(j, "r_align");
  h.source = require(j, "source").get<std::string>();
  return h;
}

json tick_to_json(const TickRecord& r) {
  json q = json::array();
  for (Eigen::Index i = 0; i < r.q.size(); ++i) q.push_back(finite(r.q[i], "q"));
  json fields = json::array();
  for (const auto& f : r.fields) {
    json jf = field_to_json(f.spec);
    jf["label"] = f.label;
    jf["d_h"] = finite(f.d_h, "d_h");
    fields.push_back(std::move(jf));
  }
  return {{"record", "tick"},
          {"index", r.index},
          {"t", finite(r.t, "t")},
          {"phase", r.phase},
          {"target", r.target},
          {"a_h", vec_to_json(r.a_h)},
          {"a_r", vec_to_json(r.a_r)},
          {"a_sa", vec_to_json(r.a_sa)},
          {"f_c", vec_to_json(r.f_c)},
          {"beta", finite(r.beta, "beta")},
          {"belief", belief_to_json(r.belief)},
          {"m", finite(r.m, "m")},
          {"q", std::move(q)},
          {"x", vec_to_json(r.x)},
          {"v", vec_to_json(r.v)},
          {"d_h", finite(r.d_h, "d_h")},
          {"fields", std::move(fields)}};
}

TickRecord tick_from_json(const json& j) {
  if (require(j, "record") != "tick") throw std::invalid_argument("record is not a tick");
  TickRecord r;
  r.index = require(j, "index").get<std::size_t>();
  r.t = num(j, "t");
  r.phase = require(j, "phase").get<std::size_t>();
  r.target = require(j, "target").get<std::size_t>();
  r.a_h = vec_from_json(require(j, "a_h"));
  r.a_r = vec_from_json(require(j, "a_r"));
  r.a_sa = vec_from_json(require(j, "a_sa"));
  r.f_c = vec_from_json(require(j, "f_c"));
  r.beta = num(j, "beta");
  r.belief = belief_from_json(require(j, "belief"));
  r.m = num(j, "m");
  const auto q = require(j, "q").get<std::vector<double>>();
  r.q = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  r.x = vec_from_json(require(j, "x"));
  r.v = vec_from_json(require(j, "v"));
  r.d_h = num(j, "d_h");
  for (const auto& jf : require(j, "fields")) {
    r.fields.push_back({require(jf, "label").get<std::string>(), field_from_json(jf), num(jf, "d_h")});
  }
  return r;
}

void write_log(std::ostream& out, const EpisodeHeader& header, const std::vector<TickRecord>& log) {
  out << header_to_json(header).dump() << '\n';
  for (const auto& r : log) out << tick_to_json(r).dump() << '\n';
  if (!out) throw std::runtime_error("failed writing episode log");
}

void write_log(const std::filesystem::path& path, const EpisodeHeader& header,
               const std::vector<TickRecord>& log) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_log(out, header, log);
}

EpisodeLog read_log(std::istream& in) {
  EpisodeLog result;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        result.header = header_from_json(j);
        have_header = true;
      } else {
        result.ticks.push_back(tick_from_json(j));
      }
    } catch (const std::exception& ex) {
      throw std::runtime_error("log line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (!have_header) throw std::runtime_error("log has no header record");
  return result;
}

EpisodeLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_log(in);
}

std::string log_file_name(const EpisodeHeader& header) {
  return std::string(to_string(header.scenario)) + "_" + std::string(to_string(header.method)) +
         "_seed" + std::to_string(header.seed) + ".jsonl";
}

}  // namespace iagf
