#pragma once

#include <cstddef>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "srtchat/corpus.hpp"
#include "srtchat/errors.hpp"
#include "srtchat/search.hpp"

namespace srtchat {

struct BenchPlan {
  std::vector<Strategy> strategies{Strategy::Levenshtein, Strategy::BowL1};
  std::vector<SearchMode> modes{SearchMode::Exhaustive};
  std::vector<std::size_t> workers{1};
};

struct BenchRow {
  Strategy strategy = Strategy::Levenshtein;
  SearchMode mode = SearchMode::Exhaustive;
  std::size_t workers = 1;
  std::size_t queries = 0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
  double build_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string environment;
  std::size_t corpus_lines = 0;
  std::size_t checked_queries = 0;  // queries verified before timing
};

// Raised when two routes that must agree (indexed vs exhaustive, or different
// worker counts) disagree. No timings are produced in that case.
class BenchMismatch : public Error {
 public:
  BenchMismatch(const std::string& what, std::vector<std::string> diff)
      : Error(what), diff_(std::move(diff)) {}
  const std::vector<std::string>& diff() const noexcept { return diff_; }

 private:
  std::vector<std::string> diff_;
};

// Verifies every bow strategy indexed == exhaustive and every worker count
// agrees, then times each (strategy, mode, workers) combination.
BenchReport run_bench(const Corpus& corpus, const std::vector<std::string>& queries, const BenchPlan& plan,
                      const StopList& stoplist = StopList::defaults());

std::string format_bench_table(const BenchReport& report);
// Rows plus "lev_vs_bow": lev exhaustive mean over each bow row's mean at the same worker count.
nlohmann::json bench_to_json(const BenchReport& report);

// Nearest-rank percentile of unsorted samples.
double percentile(std::vector<double> samples, double pct);

}  // namespace srtchat
