#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srtchat/config.hpp"
#include "srtchat/corpus.hpp"
#include "srtchat/knowledge.hpp"
#include "srtchat/search.hpp"
#include "srtchat/session.hpp"

namespace srtchat {

// Bidirectional word swaps for the mirroring fallback.
class PronounTable {
 public:
  PronounTable() = default;
  explicit PronounTable(const std::vector<std::pair<std::string, std::string>>& pairs);

  static PronounTable defaults();
  // One "left right" pair per line; '#' starts a comment.
  static PronounTable parse(std::string_view text);
  static PronounTable load(const std::filesystem::path& path);

  // Lowercase partner of a lowercase word, if mapped.
  std::optional<std::string_view> partner(std::string_view word) const;
  const std::vector<std::pair<std::string, std::string>>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::unordered_map<std::string, std::string> map_;
};

std::string_view default_pronoun_table_text() noexcept;

// Swaps mapped words in one left-to-right pass over the original words. A
// replacement copies the replaced word's capitalization (lowercase, initial-cap
// or all caps). "I" is always capitalized, and a replaced "I" counts as
// initial-cap only at the start of a sentence.
std::string pronoun_swap(std::string_view text, const PronounTable& table = PronounTable::defaults());

enum class Provenance { Corpus, Learned, Knowledge, PronounSwap };

std::string_view to_string(Provenance provenance) noexcept;

struct Reply {
  std::string text;
  Provenance provenance = Provenance::PronounSwap;
  std::optional<MatchResult> match;  // present for Corpus and Learned
  std::optional<std::string> matched_line_text;
};

// Corpus lines that have a reply, then learned prompts with ids n, n+1, ...
SearchDomain merged_search_domain(const Corpus& corpus, const std::vector<LearnedPair>& learned,
                                  const StopList& stoplist = StopList::defaults());

// Score compared against the session threshold.
double gated_score(const MatchResult& match, std::u32string_view query, std::u32string_view line);

struct RespondContext {
  const KnowledgeProvider* knowledge = nullptr;
  const PronounTable* pronouns = nullptr;
  const StopList* stoplist = nullptr;
  SearchMode mode = SearchMode::Exhaustive;
  std::size_t workers = 1;
};

// One stateless turn: knowledge, then retrieval under the session threshold,
// then pronoun swap. Appends the user and bot entries to the transcript.
// Throws InvalidInputError on blank input.
Reply respond(Session& session, std::string_view user_text, const Corpus& corpus,
              const std::vector<LearnedPair>& learned, const RespondContext& context = {});

struct TurnOverrides {
  std::optional<Strategy> strategy;
  std::optional<double> threshold;
};

struct TurnResult {
  Reply reply;
  std::optional<LearnedPair> learned;
};

struct EngineStats {
  std::size_t corpus_lines = 0;
  std::size_t learned_pairs = 0;
  std::size_t episodes = 0;
};

// Long-lived engine over one corpus. Learned pairs extend the search domain
// as they arrive; turns on different sessions may run concurrently.
class Engine {
 public:
  using LearnedSink = std::function<void(const LearnedPair&)>;

  Engine(Corpus corpus, EngineConfig config, StopList stoplist = StopList::defaults(),
         PronounTable pronouns = PronounTable::defaults(),
         std::shared_ptr<const KnowledgeProvider> knowledge = nullptr);

  // Loads the stop list, pronoun table and knowledge fixture named by `config`.
  static std::unique_ptr<Engine> create(Corpus corpus, const EngineConfig& config);

  // Called before a newly learned pair becomes searchable; a throwing sink
  // keeps the pair out of the engine.
  void set_learned_sink(LearnedSink sink) { sink_ = std::move(sink); }

  // Adds a pair without passing it to the sink (used when replaying the log).
  void add_learned(const LearnedPair& pair);

  Session new_session(std::string id) const;

  // Records the user turn, learns from it, answers, records the bot turn.
  TurnResult turn(Session& session, std::string_view user_text, const TurnOverrides& overrides = {});
  Reply respond(Session& session, std::string_view user_text) { return turn(session, user_text).reply; }

  EngineStats stats() const;
  const Corpus& corpus() const noexcept { return corpus_; }
  const EngineConfig& config() const noexcept { return config_; }
  const StopList& stoplist() const noexcept { return stoplist_; }
  std::vector<LearnedPair> learned() const;

 private:
  Corpus corpus_;
  EngineConfig config_;
  StopList stoplist_;
  PronounTable pronouns_;
  std::shared_ptr<const KnowledgeProvider> knowledge_;
  LearnedSink sink_;

  mutable std::shared_mutex mutex_;
  std::vector<LearnedPair> learned_;
  SearchDomain domain_;
};

}  // namespace srtchat
