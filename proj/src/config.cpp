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

#include "iagf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace iagf {

namespace pt = boost::property_tree;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + s + "'");
  }
}

std::vector<double> to_doubles(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(to_double(part, key));
  return out;
}

Vec2 to_vec2(const std::string& s, const std::string& key) {
  const auto v = to_doubles(s, key);
  if (v.size() != 2) throw std::invalid_argument("config key '" + key + "': expected 'x, y'");
  return {v[0], v[1]};
}

// Scalar → diagonal matrix, four values → row-major 2×2.
Mat2 to_mat2(const std::string& s, const std::string& key) {
  const auto v = to_doubles(s, key);
  if (v.size() == 1) return Mat2::Identity() * v[0];
  if (v.size() == 2) return Vec2(v[0], v[1]).asDiagonal();
  if (v.size() == 4) {
    Mat2 m;
    m << v[0], v[1], v[2], v[3];
    return m;
  }
  throw std::invalid_argument("config key '" + key + "': expected 1, 2 or 4 numbers");
}

// "A:0.5,0.52; B:-0.05,0.72"
std::vector<intent::Goal> to_goals(const std::string& s) {
  std::vector<intent::Goal> goals;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("config key 'workspace.goals': expected 'id:x,y' entries");
    }
    goals.push_back({trim(item.substr(0, colon)), to_vec2(item.substr(colon + 1), "workspace.goals")});
  }
  return goals;
}

// "A>C | A>B"
std::vector<std::vector<std::string>> to_tasks(const std::string& s) {
  std::vector<std::vector<std::string>> tasks;
  for (const auto& task : split(s, '|')) {
    if (task.empty()) continue;
    tasks.push_back(split(task, '>'));
  }
  return tasks;
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  for (const auto& part : split(s, ',')) {
    if (!part.empty()) out.push_back(parse(part));
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree_) {
      for (const auto& [key, value] : body) seen_.insert(section + "." + key);
      if (body.empty()) seen_.insert(section);
    }
  }

  template <typename Fn>
  void get(const std::string& path, Fn&& apply) {
    used_.insert(path);
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
      apply(trim(*v), path);
    }
  }

  void reject_unknown() const {
    for (const auto& key : seen_) {
      if (!used_.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

 private:
  const pt::ptree& tree_;
  std::set<std::string> seen_;
  std::set<std::string> used_;
};

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::S1: return "s1";
    case Scenario::S2: return "s2";
    case Scenario::S3: return "s3";
  }
  return "?";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::NA: return "na";
    case Method::SA: return "sa";
    case Method::IAGF: return "iagf";
  }
  return "?";
}

Scenario parse_scenario(std::string_view s) {
  const auto v = lower(s);
  if (v == "s1") return Scenario::S1;
  if (v == "s2") return Scenario::S2;
  if (v == "s3") return Scenario::S3;
  throw std::invalid_argument("unknown scenario '" + std::string(s) + "' (expected s1|s2|s3)");
}

Method parse_method(std::string_view s) {
  const auto v = lower(s);
  if (v == "na") return Method::NA;
  if (v == "sa") return Method::SA;
  if (v == "iagf" || v == "iagf-sa") return Method::IAGF;
  throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected na|sa|iagf)");
}

double SwitchingLine::signed_distance(const Vec2& x) const {
  return (x - point).dot(normal.normalized());
}

void Config::validate() const {
  impedance.validate();
  intgf.validate();
  singf.validate();
  (void)goal_set();
  if (!(dt > 0.0 && dt <= impedance::kMaxDt)) throw std::invalid_argument("dt must lie in (0, 0.02]");
  if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
  if (!(ik.damping > 0.0) || !(ik.max_step > 0.0)) {
    throw std::invalid_argument("IK damping and step cap must be positive");
  }
  if (!(gains.K_p >= 0.0 && gains.K_d >= 0.0)) throw std::invalid_argument("gains must be >= 0");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  if (!(force_clamp > 0.0)) throw std::invalid_argument("force_clamp must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(beta_max >= 0.0 && beta_max <= 1.0)) {
    throw std::invalid_argument("beta_max must lie in [0, 1]");
  }
  if (!(posterior_floor > 0.0 && posterior_floor * static_cast<double>(goals.size()) < 1.0)) {
    throw std::invalid_argument("posterior floor must be positive and below 1/G");
  }
  if (!(policy.step_max > 0.0 && policy.gain > 0.0)) {
    throw std::invalid_argument("policy gain and step_max must be positive");
  }
  if (!(operator_gain > 0.0) || !(noise_deg >= 0.0)) {
    throw std::invalid_argument("operator gain must be positive and noise non-negative");
  }
  if (!(r_grasp > 0.0 && t_hold >= 0.0 && t_max > 0.0 && r_align > 0.0)) {
    throw std::invalid_argument("episode radii and durations must be positive");
  }
  if (switching_line.normal.norm() == 0.0) {
    throw std::invalid_argument("switching line normal must be nonzero");
  }
  if (std::abs(switching_line.signed_distance(arm.base())) > arm.reach()) {
    throw std::invalid_argument("switching line does not intersect the workspace");
  }
  if ((start - arm.base()).norm() >= arm.reach()) {
    throw std::invalid_argument("start position is out of reach");
  }
  const auto gs = goal_set();
  for (const auto& [scenario, list] : tasks) {
    if (list.empty()) throw std::invalid_argument("scenario without tasks");
    for (const auto& task : list) {
      ScenarioConfig sc{scenario, task, switching_line, 0, noise_deg};
      sc.validate(gs);
    }
  }
  if (suite.seeds < 1) throw std::invalid_argument("suite needs at least one seed");
}

Config parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }

  Config c;
  Reader r(tree);
  auto num = [](double& dst) {
    return [&dst](const std::string& v, const std::string& k) { dst = to_double(v, k); };
  };

  std::vector<double> links(c.arm.link_lengths().begin(), c.arm.link_lengths().end());
  Vec2 base = c.arm.base();
  r.get("arm.link_lengths", [&](const auto& v, const auto& k) { links = to_doubles(v, k); });
  r.get("arm.base", [&](const auto& v, const auto& k) { base = to_vec2(v, k); });
  c.arm = arm::ArmGeometry(links, base);
  r.get("arm.ik_damping", num(c.ik.damping));
  r.get("arm.ik_max_step", num(c.ik.max_step));

  r.get("impedance.mass", [&](const auto& v, const auto& k) { c.impedance.M = to_mat2(v, k); });
  r.get("impedance.stiffness", [&](const auto& v, const auto& k) { c.impedance.K = to_mat2(v, k); });
  r.get("impedance.damping", [&](const auto& v, const auto& k) { c.impedance.D = to_mat2(v, k); });
  r.get("impedance.dt", num(c.dt));
  r.get("impedance.v_max", num(c.v_max));

  double d1 = c.intgf.d1;
  r.get("guidance.K_p", num(c.gains.K_p));
  r.get("guidance.K_d", num(c.gains.K_d));
  r.get("guidance.d1", num(d1));
  c.intgf.d1 = c.singf.d1 = d1;
  r.get("guidance.C_th", num(c.intgf.c_th));
  r.get("guidance.hysteresis", num(c.intgf.hysteresis));
  r.get("guidance.m_th", num(c.singf.m_th));
  r.get("guidance.m_crit", num(c.singf.m_crit));
  r.get("guidance.alpha", num(c.alpha));
  r.get("guidance.force_clamp", num(c.force_clamp));
  r.get("guidance.min_command", num(c.min_command));

  r.get("inference.gamma", num(c.gamma));
  r.get("inference.beta_max", num(c.beta_max));
  r.get("inference.posterior_floor", num(c.posterior_floor));
  r.get("inference.step_max", num(c.policy.step_max));
  r.get("inference.policy_gain", num(c.policy.gain));

  r.get("workspace.goals", [&](const auto& v, const auto&) { c.goals = to_goals(v); });
  r.get("workspace.start", [&](const auto& v, const auto& k) { c.start = to_vec2(v, k); });
  r.get("workspace.switching_line_point",
        [&](const auto& v, const auto& k) { c.switching_line.point = to_vec2(v, k); });
  r.get("workspace.switching_line_normal",
        [&](const auto& v, const auto& k) { c.switching_line.normal = to_vec2(v, k); });
  r.get("workspace.switching_band", num(c.switching_band));

  for (Scenario s : {Scenario::S1, Scenario::S2, Scenario::S3}) {
    r.get("scenarios." + std::string(to_string(s)),
          [&](const auto& v, const auto&) { c.tasks[s] = to_tasks(v); });
  }

  r.get("operator.gain", num(c.operator_gain));
  r.get("operator.noise_deg", num(c.noise_deg));

  r.get("episode.r_grasp", num(c.r_grasp));
  r.get("episode.t_hold", num(c.t_hold));
  r.get("episode.t_max", num(c.t_max));
  r.get("episode.r_align", num(c.r_align));

  r.get("suite.scenarios", [&](const auto& v, const auto&) {
    c.suite.scenarios = to_list<Scenario>(v, [](const std::string& s) { return parse_scenario(s); });
  });
  r.get("suite.methods", [&](const auto& v, const auto&) {
    c.suite.methods = to_list<Method>(v, [](const std::string& s) { return parse_method(s); });
  });
  r.get("suite.seeds", [&](const auto& v, const auto& k) { c.suite.seeds = static_cast<int>(to_double(v, k)); });
  r.get("suite.seed_start", [&](const auto& v, const auto& k) {
    c.suite.seed_start = static_cast<std::uint64_t>(to_double(v, k));
  });
  r.get("suite.threads", [&](const auto& v, const auto& k) { c.suite.threads = static_cast<int>(to_double(v, k)); });

  r.reject_unknown();
  c.validate();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void ScenarioConfig::validate(const intent::GoalSet& goals) const {
  for (const auto& id : goal_sequence) (void)goals.index_of(id);
  switch (scenario) {
    case Scenario::S1:
      if (goal_sequence.size() != 1) throw std::invalid_argument("S1 tasks have exactly one goal");
      break;
    case Scenario::S2:
      if (goal_sequence.size() != 2 || goal_sequence[0] == goal_sequence[1]) {
        throw std::invalid_argument("S2 tasks switch once between two distinct goals");
      }
      break;
    case Scenario::S3:
      if (goal_sequence.size() != 3 || goal_sequence[0] != goal_sequence[2] ||
          goal_sequence[0] == goal_sequence[1]) {
        throw std::invalid_argument("S3 tasks follow an X>Y>X pattern");
      }
      break;
  }
  if (!(noise_deg >= 0.0)) throw std::invalid_argument("noise must be non-negative");
}

ScenarioConfig make_scenario(const Config& cfg, Scenario scenario, std::uint64_t seed) {
  const auto it = cfg.tasks.find(scenario);
  if (it == cfg.tasks.end() || it->second.empty()) {
    throw std::invalid_argument("no tasks configured for scenario " + std::string(to_string(scenario)));
  }
  ScenarioConfig sc;
  sc.scenario = scenario;
  sc.goal_sequence = it->second[seed % it->second.size()];
  sc.switching_line = cfg.switching_line;
  sc.seed = seed;
  sc.noise_deg = cfg.noise_deg;
  sc.validate(cfg.goal_set());
  return sc;
}

}  // namespace iagf
