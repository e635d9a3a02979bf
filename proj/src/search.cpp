#include "srtchat/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "srtchat/errors.hpp"
#include "srtchat/levenshtein.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

struct Best {
  double score = std::numeric_limits<double>::infinity();
  std::size_t id = std::numeric_limits<std::size_t>::max();
  bool found = false;

  void offer(double s, std::size_t candidate_id) {
    if (!found || s < score || (s == score && candidate_id < id)) {
      score = s;
      id = candidate_id;
      found = true;
    }
  }
};

Norm norm_of(Strategy s) { return s == Strategy::BowL2 ? Norm::L2 : Norm::L1; }

struct PreparedQuery {
  std::u32string lowered;
  TermVector raw;
  TermVector normalized;
};

// Scores positions [begin, end) of `positions` (or of the whole domain when
// `positions` is null).
Best scan(const SearchDomain& domain, const PreparedQuery& query, Strategy strategy,
          const std::vector<std::size_t>* positions, std::size_t begin, std::size_t end) {
  Best best;
  const Norm norm = norm_of(strategy);
  for (std::size_t k = begin; k < end; ++k) {
    const std::size_t pos = positions ? (*positions)[k] : k;
    const std::size_t id = domain.id_at(pos);
    if (strategy == Strategy::Levenshtein) {
      // Ties must still be scored exactly, so the bound is the best so far.
      const std::size_t bound =
          best.found ? static_cast<std::size_t>(best.score) : std::numeric_limits<std::size_t>::max();
      const std::size_t d = levenshtein(query.lowered, domain.lowered_at(pos), bound);
      if (d <= bound) best.offer(static_cast<double>(d), id);
    } else {
      best.offer(normalized_distance(query.normalized, domain.vector_at(pos, norm), norm), id);
    }
  }
  return best;
}

Best parallel_scan(const SearchDomain& domain, const PreparedQuery& query, Strategy strategy,
                   const std::vector<std::size_t>* positions, std::size_t count, std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) return scan(domain, query, strategy, positions, 0, count);

  std::vector<Best> partials(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = count / workers;
  const std::size_t extra = count % workers;
  std::size_t begin = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t end = begin + chunk + (w < extra ? 1 : 0);
    threads.emplace_back([&, w, begin, end] { partials[w] = scan(domain, query, strategy, positions, begin, end); });
    begin = end;
  }
  for (auto& t : threads) t.join();

  Best best;
  for (const auto& p : partials) {
    if (p.found) best.offer(p.score, p.id);
  }
  return best;
}

}  // namespace

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::Levenshtein:
      return "lev";
    case Strategy::BowL1:
      return "bow-l1";
    case Strategy::BowL2:
      return "bow-l2";
  }
  return "?";
}

std::string_view to_string(SearchMode mode) noexcept {
  return mode == SearchMode::Indexed ? "indexed" : "exhaustive";
}

std::optional<Strategy> parse_strategy(std::string_view name) noexcept {
  if (name == "lev") return Strategy::Levenshtein;
  if (name == "bow-l1") return Strategy::BowL1;
  if (name == "bow-l2") return Strategy::BowL2;
  return std::nullopt;
}

std::optional<SearchMode> parse_mode(std::string_view name) noexcept {
  if (name == "exhaustive") return SearchMode::Exhaustive;
  if (name == "indexed") return SearchMode::Indexed;
  return std::nullopt;
}

double normalized_distance(const TermVector& u, const TermVector& v, Norm norm) {
  if (u.empty() && v.empty()) return 0.0;
  if (u.empty() || v.empty()) return 1.0;
  const auto& a = u.entries();
  const auto& b = v.entries();
  double acc = 0.0;
  auto add = [&](double diff) { acc += norm == Norm::L1 ? std::abs(diff) : diff * diff; };
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int cmp = a[i].first.compare(b[j].first);
    if (cmp == 0) {
      add(a[i++].second - b[j++].second);
    } else if (cmp < 0) {
      add(a[i++].second);
    } else {
      add(b[j++].second);
    }
  }
  for (; i < a.size(); ++i) add(a[i].second);
  for (; j < b.size(); ++j) add(b[j].second);
  return norm == Norm::L1 ? acc : std::sqrt(acc);
}

double bow_distance(const TermVector& u, const TermVector& v, Norm norm) {
  return normalized_distance(normalize(u, norm), normalize(v, norm), norm);
}

void InvertedIndex::add(std::size_t key, const TermVector& vector) {
  if (last_key_ && *last_key_ >= key) throw InvalidInputError("inverted index keys must be added in increasing order");
  last_key_ = key;
  for (const auto& [token, weight] : vector.entries()) postings_[token].push_back(key);
}

const std::vector<std::size_t>* InvertedIndex::postings(std::string_view token) const {
  auto it = postings_.find(std::string(token));
  return it == postings_.end() ? nullptr : &it->second;
}

InvertedIndex build_index(const Corpus& corpus) {
  InvertedIndex index;
  for (const auto& line : corpus.lines()) {
    if (corpus.has_reply(line.id)) index.add(line.id, line.vector);
  }
  return index;
}

std::vector<std::size_t> candidate_lines(const InvertedIndex& index, const TermVector& query) {
  std::vector<std::size_t> out;
  for (const auto& [token, weight] : query.entries()) {
    if (const auto* list = index.postings(token)) out.insert(out.end(), list->begin(), list->end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SearchDomain::SearchDomain(StopList stoplist) : stoplist_(std::move(stoplist)) {}

SearchDomain::SearchDomain(const Corpus& corpus, StopList stoplist) : stoplist_(std::move(stoplist)) {
  for (const auto& line : corpus.lines()) {
    if (corpus.has_reply(line.id)) add(line.id, line.text, line.vector);
  }
}

void SearchDomain::add(std::size_t id, std::string_view text) { add(id, text, preprocess(text, stoplist_)); }

void SearchDomain::add(std::size_t id, std::string_view text, const TermVector& raw_vector) {
  if (!ids_.empty() && id <= ids_.back()) throw InvalidInputError("search domain ids must increase");
  const std::size_t pos = ids_.size();
  ids_.push_back(id);
  lowered_.push_back(utf8::lower(text));
  l1_.push_back(normalize(raw_vector, Norm::L1));
  l2_.push_back(normalize(raw_vector, Norm::L2));
  if (raw_vector.empty()) {
    empty_vectors_.push_back(pos);
  } else {
    index_.add(pos, raw_vector);
  }
}

std::optional<MatchResult> best_match(std::string_view query, const SearchDomain& domain,
                                      const SearchOptions& options) {
  if (domain.empty()) return std::nullopt;
  const Strategy strategy = options.strategy;
  PreparedQuery prepared;
  if (strategy == Strategy::Levenshtein) {
    prepared.lowered = utf8::lower(query);
  } else {
    prepared.raw = preprocess(query, domain.stoplist());
    prepared.normalized = normalize(prepared.raw, norm_of(strategy));
  }

  Best best;
  std::vector<std::size_t> candidates;
  if (strategy != Strategy::Levenshtein && options.mode == SearchMode::Indexed) {
    candidates = candidate_lines(domain.index(), prepared.raw);
  }
  if (!candidates.empty()) {
    // Vectorless entries sit at distance 1 from any non-empty query and can
    // beat weakly overlapping lines, so they are always scored.
    const auto& empties = domain.empty_vector_positions();
    std::vector<std::size_t> positions;
    positions.reserve(candidates.size() + empties.size());
    std::merge(candidates.begin(), candidates.end(), empties.begin(), empties.end(),
               std::back_inserter(positions));
    best = parallel_scan(domain, prepared, strategy, &positions, positions.size(), options.workers);
  } else {
    best = parallel_scan(domain, prepared, strategy, nullptr, domain.size(), options.workers);
  }
  if (!best.found) return std::nullopt;
  return MatchResult{best.id, best.score, strategy};
}

std::optional<MatchResult> best_match(std::string_view query, const Corpus& corpus, Strategy strategy,
                                      SearchMode mode, std::size_t workers, const StopList& stoplist) {
  if (corpus.empty()) throw EmptyCorpusError();
  if (workers == 0) throw InvalidInputError("workers must be at least 1");
  SearchDomain domain(corpus, stoplist);
  return best_match(query, domain, SearchOptions{strategy, mode, workers});
}

}  // namespace srtchat
