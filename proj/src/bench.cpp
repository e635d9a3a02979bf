#include "srtchat/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

using Millis = std::chrono::duration<double, std::milli>;

template <typename Fn>
double time_ms(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return Millis(std::chrono::steady_clock::now() - start).count();
}

std::string describe(const std::optional<MatchResult>& m) {
  if (!m) return "no-match";
  char buf[64];
  std::snprintf(buf, sizeof buf, "line %zu score %.17g", m->line_id, m->score);
  return buf;
}

// Time to derive what each strategy needs from the raw corpus text.
double build_cost(const Corpus& corpus, const StopList& stoplist, Strategy strategy, SearchMode mode) {
  return time_ms([&] {
    if (strategy == Strategy::Levenshtein) {
      std::vector<std::u32string> lowered;
      lowered.reserve(corpus.size());
      for (const auto& line : corpus.lines()) {
        if (corpus.has_reply(line.id)) lowered.push_back(utf8::lower(line.text));
      }
      return;
    }
    const Norm norm = strategy == Strategy::BowL2 ? Norm::L2 : Norm::L1;
    std::vector<TermVector> vectors;
    vectors.reserve(corpus.size());
    InvertedIndex index;
    for (const auto& line : corpus.lines()) {
      if (!corpus.has_reply(line.id)) continue;
      TermVector raw = preprocess(line.text, stoplist);
      if (mode == SearchMode::Indexed) index.add(line.id, raw);
      vectors.push_back(normalize(raw, norm));
    }
  });
}

void verify(const SearchDomain& domain, const std::vector<std::string>& queries, const BenchPlan& plan) {
  std::vector<std::string> diff;
  for (Strategy strategy : plan.strategies) {
    std::vector<std::optional<MatchResult>> reference;
    reference.reserve(queries.size());
    for (const auto& q : queries) reference.push_back(best_match(q, domain, {strategy, SearchMode::Exhaustive, 1}));

    std::vector<SearchOptions> variants;
    if (strategy != Strategy::Levenshtein) variants.push_back({strategy, SearchMode::Indexed, 1});
    for (std::size_t w : plan.workers) {
      if (w == 1) continue;
      for (SearchMode mode : plan.modes) variants.push_back({strategy, mode, w});
    }
    for (const auto& opts : variants) {
      for (std::size_t i = 0; i < queries.size(); ++i) {
        auto got = best_match(queries[i], domain, opts);
        if (got != reference[i]) {
          diff.push_back(std::string(to_string(strategy)) + " " + std::string(to_string(opts.mode)) + " workers=" +
                         std::to_string(opts.workers) + " query " + std::to_string(i) + " '" + queries[i] +
                         "': expected " + describe(reference[i]) + ", got " + describe(got));
        }
      }
    }
  }
  if (!diff.empty()) throw BenchMismatch("search routes disagree on " + std::to_string(diff.size()) + " queries", diff);
}

std::string environment_note() {
  std::ostringstream out;
  out << "hardware_concurrency=" << std::thread::hardware_concurrency();
#if defined(__clang__)
  out << " compiler=clang-" << __clang_major__ << '.' << __clang_minor__;
#elif defined(__GNUC__)
  out << " compiler=gcc-" << __GNUC__ << '.' << __GNUC_MINOR__;
#endif
#ifdef NDEBUG
  out << " build=optimized";
#else
  out << " build=debug";
#endif
  return out.str();
}

}  // namespace

double percentile(std::vector<double> samples, double pct) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(samples.size())));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

BenchReport run_bench(const Corpus& corpus, const std::vector<std::string>& queries, const BenchPlan& plan,
                      const StopList& stoplist) {
  if (queries.empty()) throw InvalidInputError("bench needs at least one query");
  if (corpus.empty()) throw EmptyCorpusError();
  const SearchDomain domain(corpus, stoplist);
  verify(domain, queries, plan);

  BenchReport report;
  report.environment = environment_note();
  report.corpus_lines = corpus.size();
  report.checked_queries = queries.size();
  for (Strategy strategy : plan.strategies) {
    for (SearchMode mode : plan.modes) {
      const double build_ms = build_cost(corpus, stoplist, strategy, mode);
      for (std::size_t workers : plan.workers) {
        std::vector<double> samples;
        samples.reserve(queries.size());
        for (const auto& q : queries) {
          samples.push_back(time_ms([&] { (void)best_match(q, domain, {strategy, mode, workers}); }));
        }
        BenchRow row;
        row.strategy = strategy;
        row.mode = mode;
        row.workers = workers;
        row.queries = queries.size();
        row.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
        row.p95_ms = percentile(samples, 95.0);
        row.build_ms = build_ms;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-11s %7s %8s %12s %12s %12s\n", "strategy", "mode", "workers", "queries",
                "mean_ms", "p95_ms", "build_ms");
  out << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-8s %-11s %7zu %8zu %12.3f %12.3f %12.3f\n",
                  std::string(to_string(r.strategy)).c_str(), std::string(to_string(r.mode)).c_str(), r.workers,
                  r.queries, r.mean_ms, r.p95_ms, r.build_ms);
    out << line;
  }
  out << "# corpus_lines=" << report.corpus_lines << " " << report.environment << '\n';
  return out.str();
}

nlohmann::json bench_to_json(const BenchReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"strategy", to_string(r.strategy)},
                    {"mode", to_string(r.mode)},
                    {"workers", r.workers},
                    {"queries", r.queries},
                    {"mean_ms", r.mean_ms},
                    {"p95_ms", r.p95_ms},
                    {"build_ms", r.build_ms}});
  }
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& lev : report.rows) {
    if (lev.strategy != Strategy::Levenshtein || lev.mode != SearchMode::Exhaustive) continue;
    for (const auto& bow : report.rows) {
      if (bow.strategy == Strategy::Levenshtein || bow.workers != lev.workers || bow.mean_ms <= 0.0) continue;
      ratios.push_back({{"bow", to_string(bow.strategy)},
                        {"mode", to_string(bow.mode)},
                        {"workers", bow.workers},
                        {"ratio", lev.mean_ms / bow.mean_ms}});
    }
  }
  return {{"rows", rows},
          {"lev_vs_bow", ratios},
          {"corpus_lines", report.corpus_lines},
          {"checked_queries", report.checked_queries},
          {"environment", report.environment}};
}

}  // namespace srtchat
