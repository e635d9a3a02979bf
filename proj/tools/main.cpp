#include <unistd.h>

#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "srtchat/session.hpp"

using namespace srtchat;

int main(int argc, char** argv) {
  CLI::App app{"srtchat: reply with the line that follows the best-matching subtitle line"};
  app.require_subcommand(1);

  std::string config_path;
  std::string corpus_path;
  app.add_option("--config", config_path, "Engine config file (JSON)");
  app.add_option("--corpus", corpus_path, "Corpus snapshot (corpus-v1 JSONL)");

  auto* ingest = app.add_subcommand("ingest", "Parse and clean a directory of .srt files into a corpus");
  std::string ingest_dir;
  std::string ingest_out;
  ingest->add_option("dir", ingest_dir, "Directory of .srt files")->required();
  ingest->add_option("-o,--out", ingest_out, "Output corpus path (defaults to --corpus)");

  auto* chat = app.add_subcommand("chat", "Chat in the terminal (/quit exits, /stats prints counts)");
  std::string session_id;
  chat->add_option("--session", session_id, "Session id (defaults to a timestamped id)");

  auto* bench = app.add_subcommand("bench", "Time matching strategies over a query file");
  cli::BenchArgs bench_args;
  bench->add_option("--queries", bench_args.queries_path, "One query per line")->required();
  bench->add_option("--strategies", bench_args.strategies, "lev, bow-l1, bow-l2")->delimiter(',');
  bench->add_option("--modes", bench_args.modes, "exhaustive, indexed")->delimiter(',');
  bench->add_option("--workers", bench_args.workers, "Worker counts")->delimiter(',');
  bench->add_option("--json", bench_args.json_path, "Write the report as JSON here");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string bind = "127.0.0.1";
  int port = 8080;
  serve->add_option("--bind", bind, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");

  auto* gen = app.add_subcommand("gen", "Write a seeded synthetic SRT corpus");
  SynthOptions synth;
  std::string gen_out;
  std::string gen_queries;
  gen->add_option("--lines", synth.lines, "Dialogue lines to generate")->required();
  gen->add_option("--vocab", synth.vocab, "Vocabulary size");
  gen->add_option("--seed", synth.seed, "PRNG seed");
  gen->add_option("--episodes", synth.episodes, "Episode files (0: one per 500 lines)");
  gen->add_option("--out", gen_out, "Output directory for .srt files")->required();
  gen->add_option("--queries", synth.queries, "Number of queries to derive");
  gen->add_option("--queries-out", gen_queries, "Queries file path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  EngineConfig config;
  try {
    if (!config_path.empty()) config = EngineConfig::load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << '\n';
    return cli::kError;
  }

  auto need_corpus = [&]() -> bool {
    if (!corpus_path.empty()) return true;
    std::cerr << "--corpus is required for this command\n";
    return false;
  };

  if (*ingest) {
    if (ingest_out.empty()) ingest_out = corpus_path;
    if (ingest_out.empty()) {
      std::cerr << "ingest: give --out or --corpus\n";
      return cli::kUsage;
    }
    return cli::run_ingest(ingest_dir, ingest_out, std::cout, std::cerr);
  }
  if (*chat) {
    if (!need_corpus()) return cli::kUsage;
    if (session_id.empty()) session_id = "cli-" + std::to_string(now_ms().time_since_epoch().count());
    return cli::run_chat(corpus_path, config, session_id, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
  }
  if (*bench) {
    if (!need_corpus()) return cli::kUsage;
    bench_args.corpus_path = corpus_path;
    return cli::run_bench_command(bench_args, config, std::cout, std::cerr);
  }
  if (*serve) {
    if (!need_corpus()) return cli::kUsage;
    return cli::run_serve(corpus_path, config, bind, port, std::cout, std::cerr);
  }
  if (*gen) {
    if (!gen_queries.empty() && synth.queries == 0) synth.queries = 100;
    return cli::run_gen(synth, gen_out, gen_queries, std::cout, std::cerr);
  }
  return cli::kUsage;
}
