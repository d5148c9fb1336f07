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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include "iagf/config.hpp"
#include "iagf/harness.hpp"
#include "iagf/log_io.hpp"
#include "iagf/server.hpp"

namespace fs = std::filesystem;

namespace {

iagf::Config config_from(const std::string& path) {
  return path.empty() ? iagf::Config{} : iagf::load_config(path);
}

int cmd_run(const std::string& scenario, const std::string& method, std::uint64_t seed,
            const std::string& config_path, const fs::path& out) {
  const auto cfg = config_from(config_path);
  const auto sc = iagf::make_scenario(cfg, iagf::parse_scenario(scenario), seed);
  const auto result = iagf::run_episode(cfg, sc, iagf::parse_method(method));

  const auto log_path = out / iagf::log_file_name(result.header);
  iagf::write_log(log_path, result.header, result.log);
  auto metrics_path = log_path;
  metrics_path.replace_extension(".metrics.json");
  std::ofstream(metrics_path) << iagf::metrics_json(result.metrics) << '\n';

  std::cout << iagf::metrics_json(result.metrics) << '\n';
  std::cerr << "log: " << log_path.string() << '\n';
  return 0;
}

int cmd_suite(const std::string& config_path, const fs::path& out) {
  const auto cfg = config_from(config_path);
  const auto t0 = std::chrono::steady_clock::now();
  const auto result = iagf::run_suite(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  iagf::write_suite(result, out);

  std::printf("%-4s %-5s %4s %7s %10s %10s %10s %10s\n", "scn", "meth", "n", "succ", "time",
              "disagree", "align", "min_m");
  int errors = 0;
  for (const auto& c : result.cells) {
    std::printf("%-4s %-5s %4d %7.3f %10.3f %10.4f %10.3f %10.5f\n",
                std::string(iagf::to_string(c.scenario)).c_str(),
                std::string(iagf::to_string(c.method)).c_str(), c.episodes, c.success_rate,
                c.completion_time.mean, c.disagreement.mean, c.alignment_time.mean,
                c.min_manipulability.mean);
    errors += c.errors;
  }
  std::printf("%zu episodes in %.2f s, %d errors; results in %s\n", result.episodes.size(), secs,
              errors, out.string().c_str());
  return errors == 0 ? 0 : 1;
}

int cmd_replay(const fs::path& log_path) {
  const auto log = iagf::read_log(log_path);
  if (log.ticks.empty()) throw std::runtime_error("log has no ticks");
  const auto metrics = iagf::compute_metrics(log.header, log.ticks);
  std::cout << iagf::metrics_json(metrics) << '\n';

  auto metrics_path = log_path;
  metrics_path.replace_extension(".metrics.json");
  if (fs::exists(metrics_path)) {
    std::ifstream in(metrics_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (!(iagf::metrics_from_json(text) == metrics)) {
      std::cerr << "replayed metrics differ from " << metrics_path.string() << '\n';
      return 1;
    }
    std::cerr << "matches " << metrics_path.string() << '\n';
  }
  return 0;
}

int cmd_serve(unsigned short port, const std::string& config_path, const fs::path& log_dir,
              const fs::path& static_dir, const std::string& address) {
  iagf::service::ServerOptions opts;
  opts.address = address;
  opts.port = port;
  opts.log_dir = log_dir;
  opts.static_dir = static_dir;
  iagf::service::Server server(config_from(config_path), opts);
  server.start();
  std::cerr << "serving on http://" << address << ':' << server.port() << "/ (WebSocket /session), logs in "
            << log_dir.string() << '\n';

  boost::asio::io_context signals_ctx;
  boost::asio::signal_set signals(signals_ctx, SIGINT, SIGTERM);
  signals.async_wait([](const boost::system::error_code&, int) {});
  signals_ctx.run();
  std::cerr << "shutting down\n";
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intent- and singularity-aware guidance field simulator"};
  app.require_subcommand(1);

  std::string scenario, method, config_path;
  std::uint64_t seed = 0;
  fs::path out = "out";
  auto* run = app.add_subcommand("run", "Run one episode and write its JSONL log");
  run->add_option("--scenario", scenario, "s1 | s2 | s3")->required();
  run->add_option("--method", method, "na | sa | iagf")->required();
  run->add_option("--seed", seed, "Episode seed")->default_val(0);
  run->add_option("--config", config_path, "Config file (defaults when omitted)");
  run->add_option("--out", out, "Output directory")->default_val("out");

  auto* suite = app.add_subcommand("suite", "Run scenarios x methods x seeds and aggregate");
  suite->add_option("--config", config_path, "Config file (defaults when omitted)");
  suite->add_option("--out", out, "Output directory")->default_val("out");

  fs::path log_path;
  auto* replay = app.add_subcommand("replay", "Recompute metrics from a JSONL log");
  replay->add_option("--log", log_path, "Episode log")->required()->check(CLI::ExistingFile);

  unsigned short port = 8080;
  fs::path log_dir = "logs";
  fs::path static_dir = "ui/dist";
  std::string address = "0.0.0.0";
  auto* serve = app.add_subcommand("serve", "Serve live sessions over WebSocket");
  serve->add_option("--port", port, "TCP port")->default_val(8080);
  serve->add_option("--config", config_path, "Config file (defaults when omitted)");
  serve->add_option("--log-dir", log_dir, "Where session logs are written")->default_val("logs");
  serve->add_option("--static-dir", static_dir, "UI bundle served at /")->default_val("ui/dist");
  serve->add_option("--address", address, "Bind address")->default_val("0.0.0.0");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, method, seed, config_path, out);
    if (*suite) return cmd_suite(config_path, out);
    if (*replay) return cmd_replay(log_path);
    if (*serve) return cmd_serve(port, config_path, log_dir, static_dir, address);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
