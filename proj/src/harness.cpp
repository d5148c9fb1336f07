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

#include "iagf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace iagf {

// ScriptedOperator -----------------------------------------------------------

ScriptedOperator::ScriptedOperator(double gain, double step_max, double noise_deg,
                                   std::uint64_t seed)
    : gain_(gain), step_max_(step_max), noise_rad_(noise_deg * std::numbers::pi / 180.0), rng_(seed) {
  if (!(gain_ > 0.0) || !(step_max_ > 0.0) || !(noise_rad_ >= 0.0)) {
    throw std::invalid_argument("operator gain/step must be positive and noise non-negative");
  }
}

ScriptedOperator::ScriptedOperator(const Config& cfg, const ScenarioConfig& scenario)
    : ScriptedOperator(cfg.operator_gain, cfg.policy.step_max, scenario.noise_deg, scenario.seed) {}

Vec2 ScriptedOperator::command(const Vec2& x, const Vec2& target) {
  const double angle = noise_rad_ * noise_(rng_);
  const Vec2 a = clamp_norm(gain_ * (target - x), step_max_);
  if (noise_rad_ == 0.0) return a;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x() - s * a.y(), s * a.x() + c * a.y()};
}

// Metrics --------------------------------------------------------------------

std::optional<std::size_t> success_tick(const EpisodeHeader& header,
                                        const std::vector<TickRecord>& log) {
  GraspMonitor monitor(header);
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (monitor.update(log[i])) return i;
  }
  return std::nullopt;
}

double metric_disagreement(const std::vector<TickRecord>& log) {
  if (log.empty()) throw std::invalid_argument("disagreement of an empty log");
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : log) {
    const double nh = r.a_h.norm();
    const double nr = r.a_r.norm();
    if (nh < 1e-9 || nr < 1e-9) continue;
    sum += std::clamp(r.a_h.dot(r.a_r) / (nh * nr), -1.0, 1.0);
    ++n;
  }
  return n == 0 ? 1.0 : 1.0 - sum / static_cast<double>(n);
}

double metric_alignment_time(const std::vector<TickRecord>& log, const Vec2& goal, double r_align,
                             double dt, std::optional<std::size_t> last_tick) {
  const std::size_t end = last_tick ? std::min(*last_tick + 1, log.size()) : log.size();
  std::size_t n = 0;
  for (std::size_t i = 0; i < end; ++i) {
    if ((log[i].x - goal).norm() < r_align) ++n;
  }
  return static_cast<double>(n) * dt;
}

double metric_min_manipulability(const std::vector<TickRecord>& log) {
  if (log.empty()) throw std::invalid_argument("minimum manipulability of an empty log");
  double m = log.front().m;
  for (const auto& r : log) m = std::min(m, r.m);
  return m;
}

EpisodeMetrics compute_metrics(const EpisodeHeader& header, const std::vector<TickRecord>& log) {
  if (log.empty()) throw std::invalid_argument("cannot compute metrics of an empty log");
  EpisodeMetrics m;
  const auto hit = success_tick(header, log);
  m.success = hit.has_value();
  const std::size_t last = hit ? *hit : log.size() - 1;
  m.completion_time = static_cast<double>(last + 1) * header.dt;
  m.disagreement = metric_disagreement(log);
  m.alignment_time = metric_alignment_time(
      log, header.goals.at(header.final_goal_index()).position, header.r_align, header.dt, last);
  m.min_manipulability = metric_min_manipulability(log);
  m.ticks = log.size();
  m.switches = log.back().phase;
  return m;
}

std::string metrics_json(const EpisodeMetrics& m) {
  const nlohmann::json j = {{"success", m.success},
                            {"completion_time", m.completion_time},
                            {"disagreement", m.disagreement},
                            {"alignment_time", m.alignment_time},
                            {"min_manipulability", m.min_manipulability},
                            {"ticks", m.ticks},
                            {"switches", m.switches}};
  return j.dump(2);
}

EpisodeMetrics metrics_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  EpisodeMetrics m;
  m.success = j.at("success").get<bool>();
  m.completion_time = j.at("completion_time").get<double>();
  m.disagreement = j.at("disagreement").get<double>();
  m.alignment_time = j.at("alignment_time").get<double>();
  m.min_manipulability = j.at("min_manipulability").get<double>();
  m.ticks = j.at("ticks").get<std::size_t>();
  m.switches = j.at("switches").get<std::size_t>();
  return m;
}

EpisodeResult run_episode(const Config& cfg, const ScenarioConfig& scenario, Method method) {
  Episode episode(cfg, scenario, method);
  ScriptedOperator op(cfg, scenario);
  while (!episode.finished()) {
    episode.advance(op.command(episode.state().x, episode.target_position()));
  }
  EpisodeResult result;
  result.header = episode.header();
  result.log = episode.log();
  result.metrics = compute_metrics(result.header, result.log);
  return result;
}

// Suite ----------------------------------------------------------------------

Stat summarize(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

const SuiteCell& SuiteResult::cell(Scenario s, Method m) const {
  for (const auto& c : cells) {
    if (c.scenario == s && c.method == m) return c;
  }
  throw std::out_of_range("no suite cell for " + std::string(to_string(s)) + "/" +
                          std::string(to_string(m)));
}

std::vector<SuiteCell> aggregate(const std::vector<SuiteEpisode>& episodes) {
  std::vector<SuiteCell> cells;
  for (const auto& e : episodes) {
    const bool known = std::any_of(cells.begin(), cells.end(), [&](const SuiteCell& c) {
      return c.scenario == e.scenario && c.method == e.method;
    });
    if (!known) {
      SuiteCell c;
      c.scenario = e.scenario;
      c.method = e.method;
      cells.push_back(c);
    }
  }
  for (auto& cell : cells) {
    std::vector<double> ct, dis, al, mm;
    int successes = 0;
    for (const auto& e : episodes) {
      if (e.scenario != cell.scenario || e.method != cell.method) continue;
      ++cell.episodes;
      if (!e.error.empty()) {
        ++cell.errors;
        continue;
      }
      successes += e.metrics.success ? 1 : 0;
      ct.push_back(e.metrics.completion_time);
      dis.push_back(e.metrics.disagreement);
      al.push_back(e.metrics.alignment_time);
      mm.push_back(e.metrics.min_manipulability);
    }
    const int valid = cell.episodes - cell.errors;
    cell.success_rate = valid > 0 ? static_cast<double>(successes) / valid : 0.0;
    cell.completion_time = summarize(ct);
    cell.disagreement = summarize(dis);
    cell.alignment_time = summarize(al);
    cell.min_manipulability = summarize(mm);
  }
  return cells;
}

SuiteResult run_suite(const Config& cfg) {
  std::vector<SuiteEpisode> jobs;
  for (Scenario s : cfg.suite.scenarios) {
    for (Method m : cfg.suite.methods) {
      for (int k = 0; k < cfg.suite.seeds; ++k) {
        SuiteEpisode e;
        e.scenario = s;
        e.method = m;
        e.seed = cfg.suite.seed_start + static_cast<std::uint64_t>(k);
        jobs.push_back(std::move(e));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      SuiteEpisode& job = jobs[i];
      try {
        const auto sc = make_scenario(cfg, job.scenario, job.seed);
        job.goal_sequence = sc.goal_sequence;
        job.metrics = run_episode(cfg, sc, job.method).metrics;
      } catch (const std::exception& ex) {
        job.error = ex.what();
      }
    }
  };

  unsigned n_threads = cfg.suite.threads > 0 ? static_cast<unsigned>(cfg.suite.threads)
                                             : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SuiteResult result;
  result.episodes = std::move(jobs);
  result.cells = aggregate(result.episodes);
  return result;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_sequence(const std::vector<std::string>& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) out += (i ? ">" : "") + seq[i];
  return out;
}

nlohmann::json stat_json(const Stat& s) { return {{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

void write_suite_csv(const SuiteResult& result, std::ostream& cells_out,
                     std::ostream& episodes_out) {
  cells_out << "scenario,method,episodes,errors,success_rate,"
               "completion_time_mean,completion_time_std,disagreement_mean,disagreement_std,"
               "alignment_time_mean,alignment_time_std,min_manipulability_mean,"
               "min_manipulability_std\n";
  for (const auto& c : result.cells) {
    cells_out << to_string(c.scenario) << ',' << to_string(c.method) << ',' << c.episodes << ','
              << c.errors << ',' << num(c.success_rate) << ',' << num(c.completion_time.mean) << ','
              << num(c.completion_time.std) << ',' << num(c.disagreement.mean) << ','
              << num(c.disagreement.std) << ',' << num(c.alignment_time.mean) << ','
              << num(c.alignment_time.std) << ',' << num(c.min_manipulability.mean) << ','
              << num(c.min_manipulability.std) << '\n';
  }
  episodes_out << "scenario,method,seed,task,success,completion_time,disagreement,"
                  "alignment_time,min_manipulability,ticks,error\n";
  for (const auto& e : result.episodes) {
    std::string err = e.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    episodes_out << to_string(e.scenario) << ',' << to_string(e.method) << ',' << e.seed << ','
                 << join_sequence(e.goal_sequence) << ',' << (e.metrics.success ? 1 : 0) << ','
                 << num(e.metrics.completion_time) << ',' << num(e.metrics.disagreement) << ','
                 << num(e.metrics.alignment_time) << ',' << num(e.metrics.min_manipulability) << ','
                 << e.metrics.ticks << ',' << err << '\n';
  }
}

std::string suite_json(const SuiteResult& result) {
  nlohmann::json j;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : result.cells) {
    j["cells"].push_back({{"scenario", to_string(c.scenario)},
                          {"method", to_string(c.method)},
                          {"episodes", c.episodes},
                          {"errors", c.errors},
                          {"success_rate", c.success_rate},
                          {"completion_time", stat_json(c.completion_time)},
                          {"disagreement", stat_json(c.disagreement)},
                          {"alignment_time", stat_json(c.alignment_time)},
                          {"min_manipulability", stat_json(c.min_manipulability)}});
  }
  j["episodes"] = nlohmann::json::array();
  for (const auto& e : result.episodes) {
    nlohmann::json row = {{"scenario", to_string(e.scenario)},
                          {"method", to_string(e.method)},
                          {"seed", e.seed},
                          {"task", join_sequence(e.goal_sequence)},
                          {"success", e.metrics.success},
                          {"completion_time", e.metrics.completion_time},
                          {"disagreement", e.metrics.disagreement},
                          {"alignment_time", e.metrics.alignment_time},
                          {"min_manipulability", e.metrics.min_manipulability},
                          {"ticks", e.metrics.ticks}};
    if (!e.error.empty()) row["error"] = e.error;
    j["episodes"].push_back(std::move(row));
  }
  return j.dump(2);
}

void write_suite(const SuiteResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream cells(dir / "results.csv");
  std::ofstream episodes(dir / "episodes.csv");
  if (!cells || !episodes) throw std::runtime_error("cannot write suite CSV into " + dir.string());
  write_suite_csv(result, cells, episodes);
  std::ofstream json(dir / "results.json");
  if (!json) throw std::runtime_error("cannot write results.json into " + dir.string());
  json << suite_json(result) << '\n';
}

}  // namespace iagf
