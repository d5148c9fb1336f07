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
#include <memory>
#include <string>

#include "iagf/config.hpp"

namespace iagf::service {

struct ServerOptions {
  std::string address = "0.0.0.0";
  unsigned short port = 8080;  // 0 binds an ephemeral port
  std::filesystem::path log_dir = "logs";
  std::filesystem::path static_dir = "ui/dist";
};

/// HTTP + WebSocket front end. `/session` upgrades to the session protocol;
/// every other GET is served from static_dir.
class Server {
 public:
  Server(Config cfg, ServerOptions opts);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Port actually bound (useful with port 0).
  unsigned short port() const;

  /// Serves on the calling thread until stop().
  void run();
  /// Serves on a background thread.
  void start();
  /// Stops accepting, ends live sessions (their logs are persisted) and joins.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace iagf::service
