#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "srtchat/corpus.hpp"
#include "srtchat/text.hpp"

namespace srtchat {

enum class Strategy { Levenshtein, BowL1, BowL2 };
enum class SearchMode { Exhaustive, Indexed };

// Config and CLI spellings: "lev", "bow-l1", "bow-l2"; "exhaustive", "indexed".
std::string_view to_string(Strategy strategy) noexcept;
std::string_view to_string(SearchMode mode) noexcept;
std::optional<Strategy> parse_strategy(std::string_view name) noexcept;
std::optional<SearchMode> parse_mode(std::string_view name) noexcept;

struct MatchResult {
  std::size_t line_id = 0;
  double score = 0.0;
  Strategy strategy = Strategy::Levenshtein;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

// Distance between two raw-count vectors after normalizing both.
double bow_distance(const TermVector& u, const TermVector& v, Norm norm);

// Same, for vectors already normalized under `norm`.
double normalized_distance(const TermVector& u, const TermVector& v, Norm norm);

// Token -> ascending, duplicate-free list of keys.
class InvertedIndex {
 public:
  // Keys must be added in strictly increasing order.
  void add(std::size_t key, const TermVector& vector);

  const std::vector<std::size_t>* postings(std::string_view token) const;
  std::size_t token_count() const noexcept { return postings_.size(); }
  bool empty() const noexcept { return postings_.empty(); }
  const std::unordered_map<std::string, std::vector<std::size_t>>& all() const noexcept { return postings_; }

 private:
  std::unordered_map<std::string, std::vector<std::size_t>> postings_;
  std::optional<std::size_t> last_key_;
};

// Indexes every line that has a reply, keyed by line id.
InvertedIndex build_index(const Corpus& corpus);

// Sorted union of the posting lists of the query's tokens.
std::vector<std::size_t> candidate_lines(const InvertedIndex& index, const TermVector& query);

struct SearchOptions {
  Strategy strategy = Strategy::Levenshtein;
  SearchMode mode = SearchMode::Exhaustive;
  std::size_t workers = 1;
};

// The lines a query may match: corpus lines that have a reply, optionally
// followed by learned prompts. Each entry keeps the lowercased code points for
// edit distance, L1 and L2 vectors, and an index over entry positions.
class SearchDomain {
 public:
  explicit SearchDomain(StopList stoplist = StopList::defaults());
  // Takes the corpus vectors as they are.
  SearchDomain(const Corpus& corpus, StopList stoplist);
  explicit SearchDomain(const Corpus& corpus) : SearchDomain(corpus, StopList::defaults()) {}

  // `id` must exceed every id already present.
  void add(std::size_t id, std::string_view text);
  void add(std::size_t id, std::string_view text, const TermVector& raw_vector);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::size_t id_at(std::size_t pos) const { return ids_.at(pos); }
  const std::vector<std::size_t>& ids() const noexcept { return ids_; }
  std::u32string_view lowered_at(std::size_t pos) const { return lowered_.at(pos); }
  const TermVector& vector_at(std::size_t pos, Norm norm) const {
    return norm == Norm::L1 ? l1_.at(pos) : l2_.at(pos);
  }
  const InvertedIndex& index() const noexcept { return index_; }
  // Positions whose vector is empty; they never appear in posting lists.
  const std::vector<std::size_t>& empty_vector_positions() const noexcept { return empty_vectors_; }
  const StopList& stoplist() const noexcept { return stoplist_; }

 private:
  StopList stoplist_;
  std::vector<std::size_t> ids_;
  std::vector<std::u32string> lowered_;
  std::vector<TermVector> l1_;
  std::vector<TermVector> l2_;
  std::vector<std::size_t> empty_vectors_;
  InvertedIndex index_;
};

// Lowest-scoring entry, ties to the smallest id. Identical for any worker
// count. Indexed mode applies to bow strategies and falls back to a full scan
// when no entry shares a token with the query. nullopt when the domain is empty.
std::optional<MatchResult> best_match(std::string_view query, const SearchDomain& domain,
                                      const SearchOptions& options);

// Convenience form over a corpus alone. Throws EmptyCorpusError.
std::optional<MatchResult> best_match(std::string_view query, const Corpus& corpus, Strategy strategy,
                                      SearchMode mode, std::size_t workers,
                                      const StopList& stoplist = StopList::defaults());

}  // namespace srtchat
