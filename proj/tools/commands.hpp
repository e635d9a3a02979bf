#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "srtchat/bench.hpp"
#include "srtchat/config.hpp"
#include "srtchat/engine.hpp"
#include "srtchat/errors.hpp"
#include "srtchat/store.hpp"
#include "srtchat/synth.hpp"

namespace srtchat::cli {

enum ExitCode : int { kOk = 0, kError = 1, kUsage = 2 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct IngestSummary {
  std::size_t files = 0;
  std::size_t cues = 0;
  std::size_t kept_lines = 0;
  std::size_t dropped_lines = 0;
};

// Parses every *.srt in `dir` (sorted by name), cleans, builds and saves the
// corpus. Throws UsageError when there are no .srt files; a ParseError is
// rethrown as Error naming the file.
IngestSummary ingest(const std::filesystem::path& dir, const std::filesystem::path& out_path);

// Resolves learned/session paths from the config, else beside the corpus.
StorePaths store_paths(const std::filesystem::path& corpus_path, const EngineConfig& config);

int run_ingest(const std::filesystem::path& dir, const std::filesystem::path& out_path, std::ostream& out,
               std::ostream& err);

int run_chat(const std::filesystem::path& corpus_path, const EngineConfig& config, const std::string& session_id,
             std::istream& in, std::ostream& out, std::ostream& err, bool show_prompt = false);

struct BenchArgs {
  std::filesystem::path corpus_path;
  std::filesystem::path queries_path;
  std::filesystem::path json_path;
  std::vector<std::string> strategies{"lev", "bow-l1"};
  std::vector<std::string> modes{"exhaustive"};
  std::vector<std::size_t> workers{1};
};

int run_bench_command(const BenchArgs& args, const EngineConfig& config, std::ostream& out, std::ostream& err);

int run_gen(const SynthOptions& options, const std::filesystem::path& out_dir,
            const std::filesystem::path& queries_path, std::ostream& out, std::ostream& err);

int run_serve(const std::filesystem::path& corpus_path, const EngineConfig& config, const std::string& bind, int port,
              std::ostream& out, std::ostream& err);

// "hi how are you  [corpus lev d=0]"
std::string annotate(const Reply& reply);

}  // namespace srtchat::cli
