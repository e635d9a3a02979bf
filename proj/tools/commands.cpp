#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "srtchat/engine.hpp"
#include "srtchat/service.hpp"
#include "srtchat/srt.hpp"
#include "srtchat/store.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat::cli {
namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_score(const MatchResult& m) {
  if (m.strategy == Strategy::Levenshtein) return std::to_string(static_cast<long long>(m.score));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", m.score);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

StopList stoplist_for(const EngineConfig& config) {
  StopList list = config.stoplist_path.empty() ? StopList::defaults() : StopList::load(config.stoplist_path);
  list.min_length = config.min_length;
  return list;
}

template <typename T, typename Parse>
std::vector<T> parse_names(const std::vector<std::string>& names, Parse parse, const char* what) {
  std::vector<T> out;
  for (const auto& n : names) {
    auto v = parse(n);
    if (!v) throw UsageError(std::string("unknown ") + what + " '" + n + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::string annotate(const Reply& reply) {
  std::string out = reply.text + "  [" + std::string(to_string(reply.provenance));
  if (reply.match) out += " " + std::string(to_string(reply.match->strategy)) + " d=" + format_score(*reply.match);
  return out + "]";
}

IngestSummary ingest(const std::filesystem::path& dir, const std::filesystem::path& out_path) {
  if (!std::filesystem::is_directory(dir)) throw UsageError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && utf8::ascii_lower(entry.path().extension().string()) == ".srt") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw UsageError("no .srt files in " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  IngestSummary summary;
  std::vector<SourceFile> sources;
  for (const auto& path : files) {
    std::vector<SubtitleCue> cues;
    try {
      cues = parse_srt(read_text(path));
    } catch (const ParseError& e) {
      throw Error(path.string() + ":" + std::to_string(e.line()) + ": " + e.what());
    }
    CleanStats stats;
    auto utterances = clean_cues(cues, &stats);
    summary.files += 1;
    summary.cues += cues.size();
    summary.kept_lines += stats.kept;
    summary.dropped_lines += stats.dropped;
    sources.push_back({path.filename().string(), std::move(utterances)});
  }
  save_corpus(build_corpus(std::move(sources)), out_path);
  return summary;
}

StorePaths store_paths(const std::filesystem::path& corpus_path, const EngineConfig& config) {
  StorePaths paths = StorePaths::beside(corpus_path);
  if (!config.learned_path.empty()) paths.learned_path = config.learned_path;
  if (!config.sessions_dir.empty()) paths.sessions_dir = config.sessions_dir;
  return paths;
}

int run_ingest(const std::filesystem::path& dir, const std::filesystem::path& out_path, std::ostream& out,
               std::ostream& err) {
  try {
    const auto s = ingest(dir, out_path);
    out << "{\"files\": " << s.files << ", \"cues\": " << s.cues << ", \"kept_lines\": " << s.kept_lines
        << ", \"dropped_lines\": " << s.dropped_lines << "}\n";
    return kOk;
  } catch (const UsageError& e) {
    err << "ingest: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "ingest: " << e.what() << '\n';
    return kError;
  }
}

int run_chat(const std::filesystem::path& corpus_path, const EngineConfig& config, const std::string& session_id,
             std::istream& in, std::ostream& out, std::ostream& err, bool show_prompt) {
  std::unique_ptr<Engine> engine;
  StorePaths paths;
  try {
    paths = store_paths(corpus_path, config);
    engine = Engine::create(load_corpus(corpus_path), config);
    auto loaded = load_learned(paths.learned_path);
    if (loaded.warnings) err << "skipped " << loaded.warnings << " unreadable learned-pair line(s)\n";
    for (const auto& pair : loaded.pairs) engine->add_learned(pair);
  } catch (const std::exception& e) {
    err << "chat: cannot load corpus: " << e.what() << '\n';
    return kError;
  }
  LearnedWriter writer(paths.learned_path);
  engine->set_learned_sink([&writer](const LearnedPair& pair) { writer.append(pair); });

  Session session = engine->new_session(session_id);
  session.transcript = load_transcript(paths.sessions_dir, session_id);
  std::string line;
  while (true) {
    if (show_prompt) out << "> " << std::flush;
    if (!std::getline(in, line)) break;
    const std::string text = utf8::trim(line);
    if (text.empty()) continue;
    if (text == "/quit") break;
    if (text == "/stats") {
      const auto s = engine->stats();
      out << "corpus_lines=" << s.corpus_lines << " learned_pairs=" << s.learned_pairs << " episodes=" << s.episodes
          << " strategy=" << to_string(session.strategy) << '\n';
      continue;
    }
    try {
      const std::size_t before = session.transcript.size();
      const TurnResult result = engine->turn(session, text);
      for (std::size_t i = before; i < session.transcript.size(); ++i) {
        append_transcript_entry(paths.sessions_dir, session.id, session.transcript[i]);
      }
      out << annotate(result.reply) << '\n';
    } catch (const std::exception& e) {
      err << "chat: " << e.what() << '\n';
      return kError;
    }
  }
  return kOk;
}

int run_bench_command(const BenchArgs& args, const EngineConfig& config, std::ostream& out, std::ostream& err) {
  try {
    BenchPlan plan;
    plan.strategies = parse_names<Strategy>(args.strategies, parse_strategy, "strategy");
    plan.modes = parse_names<SearchMode>(args.modes, parse_mode, "mode");
    plan.workers = args.workers;
    if (plan.strategies.empty() || plan.modes.empty() || plan.workers.empty()) {
      throw UsageError("bench needs at least one strategy, mode and worker count");
    }
    if (std::find(plan.workers.begin(), plan.workers.end(), 0) != plan.workers.end()) {
      throw UsageError("worker counts must be positive");
    }
    std::vector<std::string> queries;
    {
      std::istringstream lines(read_text(args.queries_path));
      std::string q;
      while (std::getline(lines, q)) {
        if (!q.empty() && q.back() == '\r') q.pop_back();
        if (!utf8::is_blank(q)) queries.push_back(q);
      }
    }
    if (queries.empty()) throw UsageError("queries file " + args.queries_path.string() + " is empty");

    const StopList stoplist = stoplist_for(config);
    const Corpus corpus = load_corpus(args.corpus_path, stoplist);
    const BenchReport report = run_bench(corpus, queries, plan, stoplist);
    out << format_bench_table(report);
    if (!args.json_path.empty()) {
      std::ofstream json(args.json_path, std::ios::binary | std::ios::trunc);
      if (!json) throw IoError("cannot write " + args.json_path.string());
      json << bench_to_json(report).dump(2) << '\n';
    }
    return kOk;
  } catch (const BenchMismatch& e) {
    err << "bench: " << e.what() << "; refusing to report timings\n";
    for (const auto& d : e.diff()) err << "  " << d << '\n';
    return kError;
  } catch (const UsageError& e) {
    err << "bench: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "bench: " << e.what() << '\n';
    return kError;
  }
}

int run_gen(const SynthOptions& options, const std::filesystem::path& out_dir,
            const std::filesystem::path& queries_path, std::ostream& out, std::ostream& err) {
  try {
    const auto synth = generate_synthetic(options);
    write_synthetic(synth, out_dir, queries_path);
    out << "{\"files\": " << synth.file_names.size() << ", \"lines\": " << synth.dialogue.size()
        << ", \"noise_cues\": " << synth.noise_cues << ", \"queries\": " << synth.queries.size() << "}\n";
    return kOk;
  } catch (const InvalidInputError& e) {
    err << "gen: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << '\n';
    return kError;
  }
}

int run_serve(const std::filesystem::path& corpus_path, const EngineConfig& config, const std::string& bind, int port,
              std::ostream& out, std::ostream& err) {
  const StorePaths paths = store_paths(corpus_path, config);
  ChatService service({paths.learned_path, paths.sessions_dir, config.cors_origin, config.static_dir});
  const int status = run_service(
      service, bind, port, [&] { return Engine::create(load_corpus(corpus_path), config); },
      [&](int bound) { out << "listening on http://" << bind << ':' << bound << '\n' << std::flush; });
  if (status != 0) err << "serve: could not bind " << bind << ':' << port << " or load " << corpus_path << '\n';
  return status == 0 ? kOk : kError;
}

}  // namespace srtchat::cli
