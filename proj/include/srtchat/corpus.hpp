#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "srtchat/text.hpp"

namespace srtchat {

struct DialogueLine {
  std::size_t id = 0;
  std::string text;
  std::size_t episode = 0;
  TermVector vector;
};

// Ordered dialogue lines from one or more episodes. Line L is answered by
// line L+1 only when both belong to the same episode.
class Corpus {
 public:
  Corpus() = default;
  // Validates contiguous ids, non-blank text and episode offsets.
  Corpus(std::vector<DialogueLine> lines, std::vector<std::size_t> episode_offsets);

  std::size_t size() const noexcept { return lines_.size(); }
  bool empty() const noexcept { return lines_.empty(); }
  const std::vector<DialogueLine>& lines() const noexcept { return lines_; }
  const DialogueLine& line(std::size_t id) const { return lines_.at(id); }
  const std::vector<std::size_t>& episode_offsets() const noexcept { return episode_offsets_; }
  std::size_t episodes() const noexcept { return episode_offsets_.size(); }

  bool has_reply(std::size_t id) const noexcept {
    return id + 1 < lines_.size() && lines_[id].episode == lines_[id + 1].episode;
  }
  const DialogueLine& reply_to(std::size_t id) const { return lines_.at(id + 1); }

  // Recomputes every line's raw-count vector.
  void vectorize(const StopList& stoplist);

 private:
  std::vector<DialogueLine> lines_;
  std::vector<std::size_t> episode_offsets_;
};

struct SourceFile {
  std::string name;
  std::vector<std::string> utterances;
};

// Files are ordered by name before concatenation; files without utterances
// contribute no episode. Throws EmptyCorpusError when no line survives.
Corpus build_corpus(std::vector<SourceFile> files, const StopList& stoplist = StopList::defaults());

}  // namespace srtchat
