#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "srtchat/corpus.hpp"

namespace srtchat::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("srtchat-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
}

// One inner vector per episode.
inline Corpus corpus_of(std::vector<std::vector<std::string>> episodes) {
  std::vector<SourceFile> files;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "ep%03zu", i);
    files.push_back({name, std::move(episodes[i])});
  }
  return build_corpus(std::move(files));
}

inline Corpus seed_corpus() { return corpus_of({{"hello there", "hi how are you"}}); }

}  // namespace srtchat::testing
