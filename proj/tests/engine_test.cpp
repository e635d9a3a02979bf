#include <gtest/gtest.h>

#include <memory>
#include <random>
#include <thread>

#include "srtchat/engine.hpp"
#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"
#include "test_util.hpp"

namespace srtchat {
namespace {

using testing::corpus_of;
using testing::seed_corpus;

Session session_with(Strategy strategy, double threshold) {
  Session s;
  s.id = "s";
  s.strategy = strategy;
  s.threshold = threshold;
  return s;
}

TranscriptEntry entry(Speaker who, std::string text, std::int64_t ms = 0) {
  return {who, std::move(text), Timestamp{std::chrono::milliseconds{ms}}};
}

EngineConfig exact_config(Strategy strategy = Strategy::Levenshtein) {
  EngineConfig config;
  config.strategy = strategy;
  config.threshold = 0.0;
  return config;
}

TEST(Respond, ExactPromptGetsSuccessor) {
  for (auto strategy : {Strategy::Levenshtein, Strategy::BowL1, Strategy::BowL2}) {
    Session session = session_with(strategy, 0.0);
    const Reply reply = respond(session, "hello there", seed_corpus(), {});
    EXPECT_EQ(reply.text, "hi how are you");
    EXPECT_EQ(reply.provenance, Provenance::Corpus);
    ASSERT_TRUE(reply.match);
    EXPECT_EQ(reply.match->line_id, 0u);
    EXPECT_EQ(reply.match->strategy, strategy);
    EXPECT_EQ(reply.matched_line_text, "hello there");
    ASSERT_EQ(session.transcript.size(), 2u);
    EXPECT_EQ(session.transcript[0].speaker, Speaker::User);
    EXPECT_EQ(session.transcript[1], (TranscriptEntry{Speaker::Bot, "hi how are you", session.transcript[1].at}));
  }
}

TEST(Respond, KnowledgeComesFirst) {
  FixtureKnowledgeProvider provider;
  provider.add(QueryKindTag::WhoIs, "sachin tendulkar", "an Indian former international cricketer");
  RespondContext context;
  context.knowledge = &provider;
  Session session = session_with(Strategy::Levenshtein, 10.0);
  const Reply reply = respond(session, "Who is Sachin Tendulkar?", seed_corpus(), {}, context);
  EXPECT_EQ(reply.provenance, Provenance::Knowledge);
  EXPECT_EQ(reply.text, "Sachin Tendulkar is an Indian former international cricketer.");
  EXPECT_FALSE(reply.match);
}

TEST(Respond, UnknownEntityFallsThroughToRetrieval) {
  FixtureKnowledgeProvider provider;
  RespondContext context;
  context.knowledge = &provider;
  Session session = session_with(Strategy::Levenshtein, 1.0);
  const Reply reply = respond(session, "Who is nobody?", seed_corpus(), {}, context);
  EXPECT_EQ(reply.provenance, Provenance::Corpus);
}

TEST(Respond, PronounSwapAboveThreshold) {
  Session session = session_with(Strategy::Levenshtein, 0.0);
  const Reply reply = respond(session, "I want to know this.", seed_corpus(), {});
  EXPECT_EQ(reply.text, "You want to know this.");
  EXPECT_EQ(reply.provenance, Provenance::PronounSwap);
  EXPECT_FALSE(reply.match);
  EXPECT_FALSE(reply.matched_line_text);
}

TEST(Respond, PronounSwapWhenDomainEmpty) {
  Session session = session_with(Strategy::BowL1, 2.0);
  const Reply reply = respond(session, "I want to know this.", corpus_of({{"alone"}}), {});
  EXPECT_EQ(reply.provenance, Provenance::PronounSwap);
}

TEST(Respond, BlankInputRejected) {
  Session session = session_with(Strategy::Levenshtein, 0.5);
  EXPECT_THROW(respond(session, "   ", seed_corpus(), {}), InvalidInputError);
  EXPECT_TRUE(session.transcript.empty());
}

TEST(Respond, LevenshteinThresholdIsNormalized) {
  // d("hello therx", "hello there") = 1 over length 11.
  Session tight = session_with(Strategy::Levenshtein, 0.05);
  EXPECT_EQ(respond(tight, "hello therx", seed_corpus(), {}).provenance, Provenance::PronounSwap);
  Session loose = session_with(Strategy::Levenshtein, 0.1);
  const Reply reply = respond(loose, "hello therx", seed_corpus(), {});
  EXPECT_EQ(reply.provenance, Provenance::Corpus);
  EXPECT_EQ(reply.match->score, 1.0);
  EXPECT_NEAR(gated_score(*reply.match, U"hello therx", U"hello there"), 1.0 / 11.0, 1e-12);
}

TEST(Respond, ReplyInvariantsProperty) {
  const Corpus corpus = corpus_of({{"hello there", "hi how are you", "where are you going", "to the market"},
                                   {"what is this", "a test"}});
  const std::vector<LearnedPair> learned = {{"to the market", "buy apples", "x", {}}};
  FixtureKnowledgeProvider provider;
  provider.add(QueryKindTag::WhatIs, "dhcp", "a protocol");
  RespondContext context;
  context.knowledge = &provider;
  const std::vector<std::string> words = {"hello", "there", "I", "you", "market", "what", "is", "dhcp", "?", "we",
                                          "!", "going", "to", "the", "apples", "a"};
  std::mt19937 rng(2);
  for (int trial = 0; trial < 400; ++trial) {
    std::string text;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) text += words[rng() % words.size()] + " ";
    const auto strategy = static_cast<Strategy>(rng() % 3);
    Session session = session_with(strategy, (rng() % 4) * 0.3);
    const Reply reply = respond(session, text, corpus, learned, context);
    EXPECT_FALSE(utf8::is_blank(reply.text)) << text;
    const bool retrieved = reply.provenance == Provenance::Corpus || reply.provenance == Provenance::Learned;
    EXPECT_EQ(retrieved, reply.match.has_value()) << text;
    EXPECT_EQ(retrieved, reply.matched_line_text.has_value()) << text;
  }
}

TEST(PronounSwap, Examples) {
  EXPECT_EQ(pronoun_swap("I want to know this."), "You want to know this.");
  EXPECT_EQ(pronoun_swap("They know."), "We know.");
  EXPECT_EQ(pronoun_swap("Hello."), "Hello.");
}

TEST(PronounSwap, SinglePassAndBoundaries) {
  EXPECT_EQ(pronoun_swap("you and I"), "I and you");
  EXPECT_EQ(pronoun_swap("I am sure my dog likes me"), "You are sure your dog likes you");
  EXPECT_EQ(pronoun_swap("Item mine, iamb"), "Item mine, iamb");
  EXPECT_EQ(pronoun_swap("We, they; WE"), "They, we; THEY");
  EXPECT_EQ(pronoun_swap("  spaced\tI  "), "  spaced\tyou  ");
  EXPECT_EQ(pronoun_swap("Fine. I know"), "Fine. You know");
}

TEST(PronounSwap, InvolutionOnTableWords) {
  const PronounTable table = PronounTable::defaults();
  for (const auto& [left, right] : table.pairs())
    for (const std::string& word : {left, right}) {
      // "me" maps to "you", whose first listed partner is "i".
      if (word == "me") continue;
      const std::string twice = pronoun_swap(pronoun_swap(word, table), table);
      EXPECT_EQ(utf8::ascii_lower(twice), word);
      const std::string sentence = "so " + word + " said";
      EXPECT_EQ(utf8::ascii_lower(pronoun_swap(pronoun_swap(sentence, table), table)), sentence);
    }
  EXPECT_EQ(pronoun_swap(pronoun_swap("me")), "I");
}

TEST(PronounTable, ShippedFileMatchesDefaults) {
  const PronounTable file = PronounTable::load(std::string(SRTCHAT_CONFIG_DIR) + "/pronouns.txt");
  EXPECT_EQ(file.pairs(), PronounTable::defaults().pairs());
  EXPECT_EQ(file.partner("we"), "they");
  EXPECT_EQ(file.partner("they"), "we");
  EXPECT_EQ(file.partner("hello"), std::nullopt);
}

TEST(PronounTable, RejectsMalformedLines) {
  EXPECT_THROW(PronounTable::parse("i\n"), InvalidInputError);
  EXPECT_EQ(PronounTable::parse("# c\n\nfoo bar\n").pairs().size(), 1u);
}

TEST(LearnFromTurn, Examples) {
  Session s;
  s.id = "s1";
  s.transcript = {entry(Speaker::User, "hi"), entry(Speaker::Bot, "hello"), entry(Speaker::User, "how are you", 7)};
  const auto pair = learn_from_turn(s);
  ASSERT_TRUE(pair);
  EXPECT_EQ(*pair, (LearnedPair{"hello", "how are you", "s1", Timestamp{std::chrono::milliseconds{7}}}));

  s.transcript = {entry(Speaker::User, "hi")};
  EXPECT_FALSE(learn_from_turn(s));
  s.transcript = {entry(Speaker::User, "hi"), entry(Speaker::Bot, "hello")};
  EXPECT_FALSE(learn_from_turn(s));
  s.transcript = {entry(Speaker::User, "hi"), entry(Speaker::Bot, "hello"), entry(Speaker::User, "hi"),
                  entry(Speaker::Bot, "hey")};
  EXPECT_FALSE(learn_from_turn(s));
}

TEST(LearnFromTurn, SkipsEchoAndBlank) {
  Session s;
  s.transcript = {entry(Speaker::User, "hi"), entry(Speaker::Bot, "hello"), entry(Speaker::User, "hello")};
  EXPECT_FALSE(learn_from_turn(s));
  s.transcript.back().text = "  ";
  EXPECT_FALSE(learn_from_turn(s));
}

TEST(ReplayLearned, OnePairPerQualifyingTurnAndIdempotent) {
  std::vector<TranscriptEntry> t = {entry(Speaker::User, "a"), entry(Speaker::Bot, "b"), entry(Speaker::User, "c"),
                                    entry(Speaker::Bot, "d"),  entry(Speaker::User, "d"), entry(Speaker::Bot, "e"),
                                    entry(Speaker::User, "f")};
  const auto pairs = replay_learned("s", t);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].prompt, "b");
  EXPECT_EQ(pairs[1].prompt, "e");
  EXPECT_EQ(replay_learned("s", t), pairs);
}

TEST(MergedSearchDomain, Ids) {
  const LearnedPair pair{"good night", "sleep well", "s", {}};
  EXPECT_EQ(merged_search_domain(seed_corpus(), {pair}).ids(), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(merged_search_domain(seed_corpus(), {}).ids(), std::vector<std::size_t>{0});
  EXPECT_EQ(merged_search_domain(Corpus{}, {pair}).ids(), std::vector<std::size_t>{0});
}

TEST(MergedSearchDomain, CorpusWinsTies) {
  Session session = session_with(Strategy::Levenshtein, 0.0);
  const Reply reply = respond(session, "hello there", seed_corpus(), {{"hello there", "yo", "s", {}}});
  EXPECT_EQ(reply.provenance, Provenance::Corpus);
  EXPECT_EQ(reply.text, "hi how are you");
}

TEST(Engine, LearningLoop) {
  Engine engine(seed_corpus(), exact_config());
  std::vector<LearnedPair> sunk;
  engine.set_learned_sink([&](const LearnedPair& p) { sunk.push_back(p); });

  Session first = engine.new_session("a");
  EXPECT_EQ(engine.respond(first, "hello there").text, "hi how are you");
  const TurnResult second = engine.turn(first, "fine thanks");
  ASSERT_TRUE(second.learned);
  EXPECT_EQ(second.learned->prompt, "hi how are you");
  EXPECT_EQ(second.learned->response, "fine thanks");
  EXPECT_EQ(sunk.size(), 1u);
  EXPECT_EQ(engine.stats().learned_pairs, 1u);

  Session fresh = engine.new_session("b");
  const Reply reply = engine.respond(fresh, "hi how are you");
  EXPECT_EQ(reply.text, "fine thanks");
  EXPECT_EQ(reply.provenance, Provenance::Learned);
  EXPECT_EQ(reply.match->line_id, 2u);
  EXPECT_EQ(reply.match->score, 0.0);
}

TEST(Engine, LearningNeverWorsensExactMatchProperty) {
  const Corpus corpus = corpus_of({{"where are you", "at home", "what now", "we wait"}, {"who knows", "nobody"}});
  const std::vector<std::string> prompts = {"where are you", "what now", "hello", "who knows", "we wait", "at home"};
  std::mt19937 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    for (auto strategy : {Strategy::Levenshtein, Strategy::BowL1}) {
      Engine engine(corpus, exact_config(strategy));
      const std::string b = prompts[rng() % prompts.size()];
      const std::string u = "reply " + std::to_string(trial);
      engine.add_learned({b, u, "x", {}});
      Session s = engine.new_session("q");
      const Reply reply = engine.respond(s, b);
      ASSERT_TRUE(reply.match) << b;
      EXPECT_EQ(reply.match->score, 0.0);
      if (reply.provenance == Provenance::Learned) {
        EXPECT_EQ(reply.text, u);
      } else {
        EXPECT_EQ(reply.provenance, Provenance::Corpus);
        EXPECT_LT(reply.match->line_id, corpus.size());
      }
    }
  }
}

TEST(Engine, ThrowingSinkKeepsPairOut) {
  Engine engine(seed_corpus(), exact_config());
  engine.set_learned_sink([](const LearnedPair&) { throw IoError("disk full"); });
  Session s = engine.new_session("a");
  engine.respond(s, "hello there");
  EXPECT_THROW(engine.respond(s, "fine"), IoError);
  EXPECT_EQ(engine.stats().learned_pairs, 0u);
}

TEST(Engine, OverridesApplyPerTurn) {
  EngineConfig config;
  Engine engine(seed_corpus(), config);
  Session s = engine.new_session("a");
  EXPECT_EQ(s.threshold, 0.5);
  TurnOverrides overrides;
  overrides.strategy = Strategy::BowL2;
  const TurnResult r = engine.turn(s, "hello there", overrides);
  ASSERT_TRUE(r.reply.match);
  EXPECT_EQ(r.reply.match->strategy, Strategy::BowL2);

  overrides = {};
  overrides.threshold = 0.0;
  EXPECT_EQ(engine.turn(s, "hello therx", overrides).reply.provenance, Provenance::PronounSwap);
  EXPECT_EQ(engine.turn(s, "hello therx").reply.provenance, Provenance::Corpus);
}

TEST(Engine, StatsAndCreateFromShippedConfig) {
  const auto config = EngineConfig::load(std::string(SRTCHAT_CONFIG_DIR) + "/engine.json");
  auto engine = Engine::create(corpus_of({{"a line", "b line"}, {"c line", "d line", "e line"}}), config);
  const EngineStats stats = engine->stats();
  EXPECT_EQ(stats.corpus_lines, 5u);
  EXPECT_EQ(stats.episodes, 2u);
  EXPECT_EQ(stats.learned_pairs, 0u);
  Session s = engine->new_session("k");
  EXPECT_EQ(engine->respond(s, "What is DHCP?").provenance, Provenance::Knowledge);
}

TEST(Engine, ConcurrentSessionsLearnEveryPair) {
  Engine engine(seed_corpus(), exact_config());
  constexpr int kThreads = 4, kTurns = 25;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t)
    threads.emplace_back([&, t] {
      Session s = engine.new_session("t" + std::to_string(t));
      for (int k = 0; k < kTurns; ++k) engine.respond(s, "msg " + std::to_string(t) + " " + std::to_string(k));
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(engine.stats().learned_pairs, static_cast<std::size_t>(kThreads * (kTurns - 1)));
}

}  // namespace
}  // namespace srtchat
