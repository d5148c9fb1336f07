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

#include "iagf/server.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "iagf/log_io.hpp"
#include "iagf/protocol.hpp"
#include "iagf/session.hpp"

namespace iagf::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

struct Shared {
  Config cfg;
  ServerOptions opts;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> next_id{1};

  std::mutex loops_mutex;
  std::condition_variable loops_cv;
  int live_loops = 0;
};

void log_line(const std::string& msg) {
  static std::mutex m;
  std::lock_guard lock(m);
  std::cerr << "[serve] " << msg << '\n';
}

const char* mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".map") return "application/json";
  return "application/octet-stream";
}

constexpr const char* kFallbackIndex =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>iagf-sim</title></head>"
    "<body><p>iagf-sim session service. The UI bundle was not found; "
    "connect a client to <code>/session</code>.</p></body></html>";

// WebSocket session -----------------------------------------------------------

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, std::shared_ptr<Shared> shared)
      : ws_(std::move(socket)), shared_(std::move(shared)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

 private:
  enum class Stage { AwaitHello, AwaitConfig, Running };

  struct Outgoing {
    std::string text;
    bool close_after = false;
  };

  void on_accept(beast::error_code ec) {
    if (ec) return;
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      disconnected_ = true;
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      handle(decode(text));
    } catch (const ProtocolError& e) {
      fail(e.what());
      return;
    } catch (const std::exception& e) {
      fail(std::string("session error: ") + e.what());
      return;
    }
    if (!close_sent_ && !closing_) do_read();
  }

  void handle(const SessionMessage& msg) {
    if (have_in_seq_ && msg.seq <= last_in_seq_) throw ProtocolError("seq must strictly increase");
    have_in_seq_ = true;
    last_in_seq_ = msg.seq;

    switch (msg.kind) {
      case MessageKind::Hello: {
        if (stage_ != Stage::AwaitHello) throw ProtocolError("unexpected hello");
        if (msg.payload.contains("version") && msg.payload["version"] != kProtocolVersion) {
          throw ProtocolError("unsupported protocol version");
        }
        id_ = "s" + std::to_string(shared_->next_id++);
        SessionMessage reply;
        reply.kind = MessageKind::Hello;
        reply.payload = {{"version", kProtocolVersion}, {"server", "iagf-sim"}, {"session_id", id_}};
        enqueue(std::move(reply));
        stage_ = Stage::AwaitConfig;
        break;
      }
      case MessageKind::Config: {
        if (stage_ != Stage::AwaitConfig) throw ProtocolError("unexpected config");
        const auto req = parse_config_request(msg.payload);
        core_ = std::make_shared<SessionCore>(shared_->cfg, req, id_);
        enqueue(config_reply(req));
        stage_ = Stage::Running;
        start_loop();
        break;
      }
      case MessageKind::Input: {
        if (stage_ != Stage::Running) throw ProtocolError("input before config");
        core_->submit_input(parse_input(msg.payload), Clock::now());
        break;
      }
      case MessageKind::Bye: {
        if (stage_ == Stage::Running) {
          bye_ = true;  // the loop persists the log and closes
        } else {
          enqueue(make_event(0, "ended"), true);
          closing_ = true;
        }
        break;
      }
      default:
        throw ProtocolError("clients may not send '" + std::string(to_string(msg.kind)) + "'");
    }
  }

  SessionMessage config_reply(const SessionRequest& req) const {
    const auto& sc = core_->scenario();
    json goals = json::array();
    for (const auto& g : shared_->cfg.goals) {
      goals.push_back({{"id", g.id}, {"position", vec_to_json(g.position)}});
    }
    json links = json::array();
    for (double l : shared_->cfg.arm.link_lengths()) links.push_back(l);
    SessionMessage reply;
    reply.kind = MessageKind::Config;
    reply.payload = {{"method", to_string(req.method)},
                     {"scenario", to_string(req.scenario)},
                     {"seed", req.seed},
                     {"goals", goals},
                     {"goal_sequence", sc.goal_sequence},
                     {"switching_line",
                      {{"point", vec_to_json(sc.switching_line.point)},
                       {"normal", vec_to_json(sc.switching_line.normal)}}},
                     {"arm", {{"link_lengths", links}, {"base", vec_to_json(shared_->cfg.arm.base())}}},
                     {"dt", shared_->cfg.dt},
                     {"frame_rate", kFrameRate},
                     {"ticks_per_frame", kTicksPerFrame},
                     {"step_max", shared_->cfg.policy.step_max},
                     {"r_grasp", shared_->cfg.r_grasp},
                     {"t_max", shared_->cfg.t_max}};
    return reply;
  }

  void start_loop() {
    {
      std::lock_guard lock(shared_->loops_mutex);
      ++shared_->live_loops;
    }
    std::thread([self = shared_from_this()] {
      self->loop();
      std::lock_guard lock(self->shared_->loops_mutex);
      --self->shared_->live_loops;
      self->shared_->loops_cv.notify_all();
    }).detach();
  }

  // Runs on its own thread; touches the socket only through enqueue().
  void loop() {
    const auto period = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / kFrameRate));
    auto next = Clock::now();
    std::string reason;
    try {
      while (true) {
        if (shared_->stopping) { reason = "shutdown"; break; }
        if (disconnected_) { reason = "disconnected"; break; }
        if (bye_) { reason = "ended"; break; }
        if (core_->finished()) { reason = core_->success() ? "success" : "timeout"; break; }
        next += period;
        std::this_thread::sleep_until(next);
        enqueue(frame_encode(0, core_->advance_frame(Clock::now())));
      }
    } catch (const std::exception& e) {
      reason = "error";
      log_line("session " + id_ + ": " + e.what());
    }

    json details = {{"session_id", id_}, {"ticks", core_->episode().log().size()}};
    try {
      const auto& ep = core_->episode();
      const auto path = shared_->opts.log_dir / ("session_" + id_ + "_" + log_file_name(ep.header()));
      write_log(path, ep.header(), ep.log());
      details["log"] = path.string();
      if (auto m = core_->metrics()) details["metrics"] = json::parse(metrics_json(*m));
    } catch (const std::exception& e) {
      details["message"] = std::string("log not written: ") + e.what();
      log_line("session " + id_ + ": " + e.what());
    }
    log_line("session " + id_ + " " + reason);
    if (!disconnected_) enqueue(make_event(0, reason, std::move(details)), true);
  }

  void fail(const std::string& message) {
    log_line("protocol error" + (id_.empty() ? "" : " in " + id_) + ": " + message);
    closing_ = true;
    bye_ = true;  // stops a running loop; it persists the log
    enqueue(make_event(0, "error", {{"message", message}}), true);
  }

  void enqueue(SessionMessage msg, bool close_after = false) {
    net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg), close_after]() mutable {
      if (self->close_sent_) return;
      msg.seq = ++self->out_seq_;
      self->out_.push_back({encode(msg), close_after});
      if (!self->writing_) self->do_write();
    });
  }

  void do_write() {
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(out_.front().text),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      disconnected_ = true;
      out_.clear();
      writing_ = false;
      return;
    }
    const bool close = out_.front().close_after;
    out_.pop_front();
    if (close) {
      close_sent_ = true;
      out_.clear();
      writing_ = false;
      ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
      return;
    }
    if (!out_.empty()) {
      do_write();
    } else {
      writing_ = false;
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::shared_ptr<Shared> shared_;
  std::shared_ptr<SessionCore> core_;
  std::string id_;
  Stage stage_ = Stage::AwaitHello;

  // Strand-only state.
  std::deque<Outgoing> out_;
  bool writing_ = false;
  bool close_sent_ = false;
  bool closing_ = false;
  std::uint64_t out_seq_ = 0;
  std::uint64_t last_in_seq_ = 0;
  bool have_in_seq_ = false;

  // Shared with the loop thread.
  std::atomic<bool> disconnected_{false};
  std::atomic<bool> bye_{false};
};

// HTTP session ----------------------------------------------------------------

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, std::shared_ptr<Shared> shared)
      : stream_(std::move(socket)), shared_(std::move(shared)) {}

  void run() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
  }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/session") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), shared_)->run(std::move(req_));
        return;
      }
      return send(error_response(http::status::not_found, "no WebSocket endpoint here"));
    }
    send(static_response());
  }

  http::response<http::string_body> error_response(http::status status, const std::string& why) {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::content_type, "text/plain");
    res.keep_alive(req_.keep_alive());
    res.body() = why + "\n";
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> static_response() {
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return error_response(http::status::method_not_allowed, "only GET and HEAD are served");
    }
    std::string target(req_.target());
    target = target.substr(0, target.find('?'));
    if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos) {
      return error_response(http::status::bad_request, "bad path");
    }
    if (target.back() == '/') target += "index.html";

    const auto path = shared_->opts.static_dir / target.substr(1);
    std::string body;
    std::string type = mime_type(path);
    std::ifstream in(path, std::ios::binary);
    if (in && std::filesystem::is_regular_file(path)) {
      std::ostringstream ss;
      ss << in.rdbuf();
      body = ss.str();
    } else if (target == "/index.html") {
      body = kFallbackIndex;
    } else {
      return error_response(http::status::not_found, "not found");
    }

    http::response<http::string_body> res{http::status::ok, req_.version()};
    res.set(http::field::content_type, type);
    res.keep_alive(req_.keep_alive());
    if (req_.method() == http::verb::head) {
      res.content_length(body.size());
    } else {
      res.body() = std::move(body);
      res.prepare_payload();
    }
    return res;
  }

  void send(http::response<http::string_body> res) {
    auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (sp->need_eof()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->do_read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<Shared> shared_;
};

}  // namespace

// Server ------------------------------------------------------------------------

struct Server::Impl {
  net::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::shared_ptr<Shared> shared = std::make_shared<Shared>();
  std::thread runner;

  void do_accept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        if (ec == net::error::operation_aborted) return;
      } else {
        std::make_shared<HttpSession>(std::move(socket), shared)->run();
      }
      do_accept();
    });
  }
};

Server::Server(Config cfg, ServerOptions opts) : impl_(std::make_unique<Impl>()) {
  cfg.validate();
  impl_->shared->cfg = std::move(cfg);
  impl_->shared->opts = std::move(opts);
  std::filesystem::create_directories(impl_->shared->opts.log_dir);

  const auto& o = impl_->shared->opts;
  const tcp::endpoint ep{net::ip::make_address(o.address), o.port};
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(net::socket_base::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen(net::socket_base::max_listen_connections);
  impl_->do_accept();
}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() { impl_->ioc.run(); }

void Server::start() {
  impl_->runner = std::thread([this] { impl_->ioc.run(); });
}

void Server::stop() {
  auto& sh = *impl_->shared;
  if (sh.stopping.exchange(true)) return;
  {
    std::unique_lock lock(sh.loops_mutex);
    sh.loops_cv.wait_for(lock, std::chrono::seconds(5), [&] { return sh.live_loops == 0; });
  }
  net::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  impl_->ioc.stop();
  if (impl_->runner.joinable()) impl_->runner.join();
}

}  // namespace iagf::service
