#pragma once

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "srtchat/engine.hpp"
#include "srtchat/store.hpp"

namespace httplib {
class Server;
}

namespace srtchat {

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::filesystem::path learned_path;
  std::filesystem::path sessions_dir;
  std::string cors_origin;
  std::filesystem::path static_dir;
};

// HTTP front end for an Engine. Answers 503 until an engine is attached.
// Turns for one session id run one at a time in arrival order; different
// sessions run concurrently.
class ChatService {
 public:
  explicit ChatService(ServiceOptions options);
  ~ChatService();

  // Replays the learned log into the engine, then starts serving it.
  void attach(std::unique_ptr<Engine> engine);
  bool ready() const noexcept { return ready_.load(); }

  // `query` holds the URL parameters ("strategy", "threshold").
  HttpResult chat(std::string_view body, const std::map<std::string, std::string>& query = {});
  HttpResult stats() const;
  HttpResult health() const;

  void install_routes(httplib::Server& server);

  std::size_t skipped_learned_lines() const noexcept { return skipped_learned_; }

 private:
  struct SessionSlot;
  std::shared_ptr<SessionSlot> slot_for(const std::string& session_id);

  ServiceOptions options_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<LearnedWriter> writer_;
  std::atomic<bool> ready_{false};
  std::size_t skipped_learned_ = 0;

  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<SessionSlot>> sessions_;
};

// Binds, loads the engine in the background via `load`, and serves until
// SIGINT or SIGTERM. Port 0 picks a free port, reported through `on_bound`.
// Returns 0 after a clean stop, 1 when binding or loading fails.
int run_service(ChatService& service, const std::string& bind, int port,
                const std::function<std::unique_ptr<Engine>()>& load,
                const std::function<void(int bound_port)>& on_bound = {});

}  // namespace srtchat
