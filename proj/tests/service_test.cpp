#include <gtest/gtest.h>
#include <httplib.h>
#include <signal.h>

#include <future>
#include <thread>

#include "srtchat/service.hpp"
#include "srtchat/store.hpp"
#include "process_util.hpp"
#include "test_util.hpp"

namespace srtchat {
namespace {

using nlohmann::json;
using testing::seed_corpus;
using testing::TempDir;

std::unique_ptr<Engine> seed_engine(EngineConfig config = {}) {
  auto knowledge = std::make_shared<FixtureKnowledgeProvider>(
      FixtureKnowledgeProvider::load(std::string(SRTCHAT_CONFIG_DIR) + "/knowledge.json"));
  return std::make_unique<Engine>(seed_corpus(), config, StopList::defaults(), PronounTable::defaults(), knowledge);
}

EngineConfig exact() {
  EngineConfig config;
  config.threshold = 0.0;
  return config;
}

std::string chat_body(const std::string& session, const std::string& text) {
  return json{{"session_id", session}, {"text", text}}.dump();
}

class ServiceTest : public ::testing::Test {
 protected:
  ServiceOptions options() const { return {dir / "learned.jsonl", dir / "sessions", "", ""}; }
  TempDir dir;
};

TEST_F(ServiceTest, LoadingUntilAttached) {
  ChatService service(options());
  EXPECT_EQ(service.health().status, 503);
  EXPECT_EQ(service.health().body, (json{{"status", "loading"}}));
  EXPECT_EQ(service.stats().status, 503);
  EXPECT_EQ(service.chat(chat_body("s1", "hi")).status, 503);
  service.attach(seed_engine());
  EXPECT_EQ(service.health().status, 200);
  EXPECT_EQ(service.health().body, (json{{"status", "ok"}}));
}

TEST_F(ServiceTest, ChatExamples) {
  ChatService service(options());
  service.attach(seed_engine());

  HttpResult r = service.chat(chat_body("s1", "hello there"));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["reply"], "hi how are you");
  EXPECT_EQ(r.body["provenance"], "corpus");
  EXPECT_EQ(r.body["matched_line"], "hello there");
  EXPECT_EQ(r.body["score"], 0.0);
  EXPECT_EQ(r.body["strategy"], "lev");
  EXPECT_GE(r.body["latency_ms"].get<double>(), 0.0);

  r = service.chat(chat_body("s1", "  "));
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body, (json{{"error", "empty_text"}}));

  r = service.chat(chat_body("s2", "Who is Sachin Tendulkar?"));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["provenance"], "knowledge");
  EXPECT_TRUE(r.body["matched_line"].is_null());
  EXPECT_TRUE(r.body["score"].is_null());
}

TEST_F(ServiceTest, BadRequests) {
  ChatService service(options());
  service.attach(seed_engine());
  EXPECT_EQ(service.chat("{not json").body, (json{{"error", "invalid_json"}}));
  EXPECT_EQ(service.chat("[1,2]").body, (json{{"error", "invalid_json"}}));
  EXPECT_EQ(service.chat(R"({"session_id":"s"})").body, (json{{"error", "empty_text"}}));
  EXPECT_EQ(service.chat(R"({"session_id":" ","text":"hi"})").body, (json{{"error", "empty_session_id"}}));
  EXPECT_EQ(service.chat(chat_body("s", "hi"), {{"strategy", "cosine"}}).body, (json{{"error", "bad_strategy"}}));
  EXPECT_EQ(service.chat(chat_body("s", "hi"), {{"threshold", "-1"}}).body, (json{{"error", "bad_threshold"}}));
  EXPECT_EQ(service.chat(chat_body("s", "hi"), {{"threshold", "0.3x"}}).status, 400);
  // Unknown fields are ignored.
  EXPECT_EQ(service.chat(R"({"session_id":"s","text":"hello there","extra":[1]})").status, 200);
}

TEST_F(ServiceTest, QueryOverrides) {
  ChatService service(options());
  service.attach(seed_engine());
  HttpResult r = service.chat(chat_body("s", "hello there"), {{"strategy", "bow-l1"}});
  EXPECT_EQ(r.body["strategy"], "bow-l1");
  EXPECT_EQ(r.body["provenance"], "corpus");
  r = service.chat(chat_body("t", "hello therx"), {{"threshold", "0"}});
  EXPECT_EQ(r.body["provenance"], "pronoun-swap");
  EXPECT_EQ(r.body["strategy"], "lev");
  r = service.chat(chat_body("u", "hello therx"));
  EXPECT_EQ(r.body["provenance"], "corpus");
}

TEST_F(ServiceTest, StatsAndLearningPersist) {
  {
    ChatService service(options());
    service.attach(seed_engine(exact()));
    EXPECT_EQ(service.stats().body,
              (json{{"corpus_lines", 2}, {"learned_pairs", 0}, {"episodes", 1}, {"strategy", "lev"}}));
    service.chat(chat_body("s1", "hello there"));
    service.chat(chat_body("s1", "fine thanks"));
    EXPECT_EQ(service.stats().body["learned_pairs"], 1);
  }
  const auto learned = load_learned(dir / "learned.jsonl");
  ASSERT_EQ(learned.pairs.size(), 1u);
  EXPECT_EQ(learned.pairs[0].prompt, "hi how are you");
  EXPECT_EQ(learned.pairs[0].response, "fine thanks");
  EXPECT_EQ(load_transcript(dir / "sessions", "s1").size(), 4u);

  ChatService restarted(options());
  restarted.attach(seed_engine(exact()));
  EXPECT_EQ(restarted.stats().body["learned_pairs"], 1);
  const HttpResult r = restarted.chat(chat_body("s9", "hi how are you"));
  EXPECT_EQ(r.body["reply"], "fine thanks");
  EXPECT_EQ(r.body["provenance"], "learned");
}

TEST_F(ServiceTest, SessionResumesFromTranscript) {
  {
    ChatService service(options());
    service.attach(seed_engine(exact()));
    service.chat(chat_body("s1", "hello there"));
  }
  ChatService restarted(options());
  restarted.attach(seed_engine(exact()));
  // The bot's last line before the restart was "hi how are you".
  restarted.chat(chat_body("s1", "good and you"));
  const auto learned = load_learned(dir / "learned.jsonl");
  ASSERT_EQ(learned.pairs.size(), 1u);
  EXPECT_EQ(learned.pairs[0].prompt, "hi how are you");
}

TEST_F(ServiceTest, TornLearnedLineIsSkippedOnAttach) {
  testing::spit(dir / "learned.jsonl",
                learned_to_json_line({"a b", "c d", "s", {}}) + "\n{\"prompt\":\"tor");
  ChatService service(options());
  service.attach(seed_engine());
  EXPECT_EQ(service.skipped_learned_lines(), 1u);
  EXPECT_EQ(service.stats().body["learned_pairs"], 1);
}

TEST_F(ServiceTest, SameSessionTurnsStaySerial) {
  ChatService service(options());
  service.attach(seed_engine(exact()));
  constexpr int kThreads = 8;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t)
    threads.emplace_back([&, t] {
      for (int k = 0; k < 10; ++k) service.chat(chat_body("shared", "m" + std::to_string(t) + "x" + std::to_string(k)));
    });
  for (auto& th : threads) th.join();
  const auto transcript = load_transcript(dir / "sessions", "shared");
  ASSERT_EQ(transcript.size(), 2u * kThreads * 10);
  for (std::size_t i = 0; i < transcript.size(); ++i)
    EXPECT_EQ(transcript[i].speaker, i % 2 == 0 ? Speaker::User : Speaker::Bot);
  EXPECT_EQ(load_learned(dir / "learned.jsonl").pairs.size(), static_cast<std::size_t>(kThreads * 10 - 1));
}

TEST_F(ServiceTest, EngineFailureIs500) {
  ServiceOptions broken = options();
  testing::spit(dir / "blocker", "");
  broken.sessions_dir = dir / "blocker" / "sessions";
  ChatService service(broken);
  service.attach(seed_engine());
  const HttpResult r = service.chat(chat_body("s", "hello there"));
  EXPECT_EQ(r.status, 500);
  EXPECT_EQ(r.body, (json{{"error", "internal"}}));
}

// Runs the real HTTP stack on a free port and stops it with SIGTERM.
TEST_F(ServiceTest, HttpEndToEnd) {
  sigset_t stop, previous;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, &previous);

  ServiceOptions opts = options();
  opts.cors_origin = "http://localhost:5173";
  ChatService service(opts);
  std::promise<int> bound;
  std::promise<void> release;
  auto release_future = release.get_future().share();
  int status = -1;
  std::thread server([&] {
    status = run_service(
        service, "127.0.0.1", 0,
        [&] {
          release_future.wait();
          return seed_engine();
        },
        [&](int port) { bound.set_value(port); });
  });
  const int port = bound.get_future().get();
  httplib::Client client("127.0.0.1", port);

  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 503);
  EXPECT_EQ(json::parse(health->body), (json{{"status", "loading"}}));
  release.set_value();
  for (int i = 0; i < 200 && !service.ready(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");

  auto res = client.Post("/api/chat?strategy=bow-l2&threshold=0", chat_body("h1", "hello there"), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const json body = json::parse(res->body);
  EXPECT_EQ(body["reply"], "hi how are you");
  EXPECT_EQ(body["strategy"], "bow-l2");

  res = client.Post("/api/chat", chat_body("h1", " "), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  auto stats = client.Get("/api/stats");
  ASSERT_TRUE(stats);
  EXPECT_EQ(json::parse(stats->body)["corpus_lines"], 2);
  auto root = client.Get("/");
  ASSERT_TRUE(root);
  EXPECT_EQ(root->status, 200);

  ::kill(::getpid(), SIGTERM);
  server.join();
  EXPECT_EQ(status, 0);
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
}

TEST_F(ServiceTest, StaticBundleServedAtRoot) {
  std::filesystem::create_directories(dir / "ui");
  testing::spit(dir / "ui" / "index.html", "<!doctype html><title>chat</title>");
  ServiceOptions opts = options();
  opts.static_dir = dir / "ui";
  ChatService service(opts);
  service.attach(seed_engine());
  httplib::Server server;
  service.install_routes(server);
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_NE(res->body.find("<title>chat</title>"), std::string::npos);
  server.stop();
  t.join();
}

TEST_F(ServiceTest, OccupiedPortFails) {
  testing::ListeningSocket holder;
  const int port = holder.port();
  ChatService service(options());
  bool loaded = false;
  EXPECT_EQ(run_service(service, "127.0.0.1", port, [&] {
              loaded = true;
              return seed_engine();
            }),
            1);
  EXPECT_FALSE(loaded);
}

}  // namespace
}  // namespace srtchat
