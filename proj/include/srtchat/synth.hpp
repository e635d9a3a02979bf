#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace srtchat {

struct SynthOptions {
  std::size_t lines = 1000;     // dialogue cues that survive cleaning
  std::size_t vocab = 2000;     // distinct content words
  std::uint64_t seed = 1;
  std::size_t episodes = 0;     // 0: one episode per 500 lines
  std::size_t queries = 0;      // queries to derive alongside the corpus
};

struct SynthCorpus {
  std::vector<std::string> file_names;
  std::vector<std::string> file_contents;  // SRT text, including noise cues
  std::vector<std::string> dialogue;       // the utterances cleaning should keep
  std::vector<std::string> queries;
  std::size_t noise_cues = 0;
};

// Deterministic for a given option set.
SynthCorpus generate_synthetic(const SynthOptions& options);

// Writes the SRT files into `dir` and, when `queries_path` is non-empty, one query per line.
void write_synthetic(const SynthCorpus& synth, const std::filesystem::path& dir,
                     const std::filesystem::path& queries_path = {});

}  // namespace srtchat
