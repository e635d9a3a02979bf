#include "srtchat/service.hpp"

#include <httplib.h>
#include <pthread.h>

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {

// Ticket lock so a session's requests are served in the order they arrived.
struct ChatService::SessionSlot {
  std::mutex mutex;
  std::condition_variable cv;
  std::uint64_t next_ticket = 0;
  std::uint64_t serving = 0;
  bool loaded = false;
  Session session;
};

namespace {

HttpResult error(int status, std::string_view code) { return {status, {{"error", code}}}; }

nlohmann::json reply_json(const Reply& reply, Strategy strategy, double latency_ms) {
  nlohmann::json out;
  out["reply"] = reply.text;
  out["provenance"] = to_string(reply.provenance);
  out["matched_line"] = reply.matched_line_text ? nlohmann::json(*reply.matched_line_text) : nlohmann::json();
  out["score"] = reply.match ? nlohmann::json(reply.match->score) : nlohmann::json();
  out["strategy"] = to_string(reply.match ? reply.match->strategy : strategy);
  out["latency_ms"] = latency_ms;
  return out;
}

void send(httplib::Response& res, const HttpResult& result) {
  res.status = result.status;
  res.set_content(result.body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace), "application/json");
}

}  // namespace

ChatService::ChatService(ServiceOptions options) : options_(std::move(options)) {}
ChatService::~ChatService() = default;

void ChatService::attach(std::unique_ptr<Engine> engine) {
  if (!options_.learned_path.empty()) {
    auto loaded = load_learned(options_.learned_path);
    skipped_learned_ = loaded.warnings;
    for (const auto& pair : loaded.pairs) engine->add_learned(pair);
    writer_ = std::make_unique<LearnedWriter>(options_.learned_path);
    engine->set_learned_sink([w = writer_.get()](const LearnedPair& pair) { w->append(pair); });
  }
  engine_ = std::move(engine);
  ready_.store(true);
}

std::shared_ptr<ChatService::SessionSlot> ChatService::slot_for(const std::string& session_id) {
  std::lock_guard lock(sessions_mutex_);
  auto& slot = sessions_[session_id];
  if (!slot) slot = std::make_shared<SessionSlot>();
  return slot;
}

HttpResult ChatService::chat(std::string_view body, const std::map<std::string, std::string>& query) {
  if (!ready()) return {503, {{"status", "loading"}}};
  const auto started = std::chrono::steady_clock::now();

  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    return error(400, "invalid_json");
  }
  if (!request.is_object()) return error(400, "invalid_json");
  const auto text_it = request.find("text");
  if (text_it == request.end() || !text_it->is_string() || utf8::is_blank(text_it->get_ref<const std::string&>())) {
    return error(400, "empty_text");
  }
  const auto id_it = request.find("session_id");
  if (id_it == request.end() || !id_it->is_string() || utf8::is_blank(id_it->get_ref<const std::string&>())) {
    return error(400, "empty_session_id");
  }
  const std::string session_id = *id_it;
  const std::string text = *text_it;

  TurnOverrides overrides;
  if (auto it = query.find("strategy"); it != query.end() && !it->second.empty()) {
    overrides.strategy = parse_strategy(it->second);
    if (!overrides.strategy) return error(400, "bad_strategy");
  }
  if (auto it = query.find("threshold"); it != query.end() && !it->second.empty()) {
    try {
      std::size_t used = 0;
      overrides.threshold = std::stod(it->second, &used);
      if (used != it->second.size() || *overrides.threshold < 0) return error(400, "bad_threshold");
    } catch (const std::exception&) {
      return error(400, "bad_threshold");
    }
  }

  auto slot = slot_for(session_id);
  std::unique_lock lock(slot->mutex);
  const std::uint64_t ticket = slot->next_ticket++;
  slot->cv.wait(lock, [&] { return slot->serving == ticket; });
  struct Release {
    SessionSlot& s;
    ~Release() {
      ++s.serving;
      s.cv.notify_all();
    }
  } release{*slot};

  try {
    if (!slot->loaded) {
      slot->session = engine_->new_session(session_id);
      if (!options_.sessions_dir.empty()) slot->session.transcript = load_transcript(options_.sessions_dir, session_id);
      slot->loaded = true;
    }
    Session& session = slot->session;
    const std::size_t before = session.transcript.size();
    TurnResult result = engine_->turn(session, text, overrides);
    if (!options_.sessions_dir.empty()) {
      for (std::size_t i = before; i < session.transcript.size(); ++i) {
        append_transcript_entry(options_.sessions_dir, session_id, session.transcript[i]);
      }
    }
    const double latency =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return {200, reply_json(result.reply, overrides.strategy.value_or(session.strategy), latency)};
  } catch (const InvalidInputError&) {
    return error(400, "empty_text");
  } catch (const std::exception& e) {
    std::cerr << "chat turn failed: " << e.what() << '\n';
    return error(500, "internal");
  }
}

HttpResult ChatService::stats() const {
  if (!ready()) return {503, {{"status", "loading"}}};
  const auto s = engine_->stats();
  return {200,
          {{"corpus_lines", s.corpus_lines},
           {"learned_pairs", s.learned_pairs},
           {"episodes", s.episodes},
           {"strategy", to_string(engine_->config().strategy)}}};
}

HttpResult ChatService::health() const {
  if (!ready()) return {503, {{"status", "loading"}}};
  return {200, {{"status", "ok"}}};
}

void ChatService::install_routes(httplib::Server& server) {
  if (!options_.cors_origin.empty()) {
    server.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
  server.Post("/api/chat", [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);
    send(res, chat(req.body, query));
  });
  server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) { send(res, stats()); });
  server.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });

  if (!options_.static_dir.empty() && std::filesystem::is_directory(options_.static_dir)) {
    server.set_mount_point("/", options_.static_dir.string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("srtchat service is running; no chat UI bundle is installed.\n", "text/plain");
    });
  }
}

int run_service(ChatService& service, const std::string& bind, int port,
                const std::function<std::unique_ptr<Engine>()>& load,
                const std::function<void(int bound_port)>& on_bound) {
  // Block the stop signals here so every thread inherits the mask and only
  // the waiter below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  httplib::Server server;
  service.install_routes(server);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(bind);
  } else if (!server.bind_to_port(bind, port)) {
    bound = -1;
  }
  if (bound < 0) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    return 1;
  }
  if (on_bound) on_bound(bound);

  std::atomic<bool> load_failed{false};
  std::thread loader([&] {
    server.wait_until_ready();
    try {
      service.attach(load());
    } catch (const std::exception& e) {
      std::cerr << "load failed: " << e.what() << '\n';
      load_failed.store(true);
      server.stop();
    }
  });
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  server.listen_after_bind();
  loader.join();
  // Wake the waiter if the server stopped for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return load_failed.load() ? 1 : 0;
}

}  // namespace srtchat
