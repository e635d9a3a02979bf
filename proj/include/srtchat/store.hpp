#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "srtchat/corpus.hpp"
#include "srtchat/session.hpp"

namespace srtchat {

struct StorePaths {
  std::filesystem::path corpus_path;
  std::filesystem::path learned_path;
  std::filesystem::path sessions_dir;

  // learned.jsonl and sessions/ beside the corpus file.
  static StorePaths beside(const std::filesystem::path& corpus_path);
};

// corpus-v1: a header object {"format","episodes"} then one {"id","episode","text"} per line.
std::string serialize_corpus(const Corpus& corpus);
// Throws FormatError carrying the byte offset of the offending line.
Corpus parse_corpus(std::string_view data, const StopList& stoplist = StopList::defaults());

void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path, const StopList& stoplist = StopList::defaults());

std::string learned_to_json_line(const LearnedPair& pair);

struct LearnedLoad {
  std::vector<LearnedPair> pairs;
  std::size_t warnings = 0;  // unreadable lines skipped
};

LearnedLoad parse_learned(std::string_view data);
// A missing file loads as empty.
LearnedLoad load_learned(const std::filesystem::path& path);

// Appends one record and flushes. If the file ends in a torn record, a newline
// is written first so the new record starts on its own line.
void append_learned(const LearnedPair& pair, const std::filesystem::path& path);

// Serializes appends from concurrent callers onto one file.
class LearnedWriter {
 public:
  explicit LearnedWriter(std::filesystem::path path) : path_(std::move(path)) {}
  void append(const LearnedPair& pair);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

// One JSONL file per session: {"speaker","text","timestamp"} per entry.
std::filesystem::path session_file(const std::filesystem::path& sessions_dir, std::string_view session_id);
void append_transcript_entry(const std::filesystem::path& sessions_dir, std::string_view session_id,
                             const TranscriptEntry& entry);
std::vector<TranscriptEntry> load_transcript(const std::filesystem::path& sessions_dir, std::string_view session_id,
                                             std::size_t* warnings = nullptr);

}  // namespace srtchat
