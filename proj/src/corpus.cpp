#include "srtchat/corpus.hpp"

#include <algorithm>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {

Corpus::Corpus(std::vector<DialogueLine> lines, std::vector<std::size_t> episode_offsets)
    : lines_(std::move(lines)), episode_offsets_(std::move(episode_offsets)) {
  if (lines_.empty()) {
    if (!episode_offsets_.empty()) throw InvalidInputError("episode offsets given for an empty corpus");
    return;
  }
  if (episode_offsets_.empty() || episode_offsets_.front() != 0) {
    throw InvalidInputError("episode offsets must start at 0");
  }
  for (std::size_t e = 1; e < episode_offsets_.size(); ++e) {
    if (episode_offsets_[e] <= episode_offsets_[e - 1] || episode_offsets_[e] >= lines_.size()) {
      throw InvalidInputError("episode offsets must be strictly increasing and within the corpus");
    }
  }
  std::size_t episode = 0;
  for (std::size_t id = 0; id < lines_.size(); ++id) {
    while (episode + 1 < episode_offsets_.size() && episode_offsets_[episode + 1] <= id) ++episode;
    const auto& line = lines_[id];
    if (line.id != id) throw InvalidInputError("line ids must be contiguous from 0");
    if (line.episode != episode) throw InvalidInputError("line " + std::to_string(id) + " has the wrong episode");
    if (utf8::is_blank(line.text)) throw InvalidInputError("line " + std::to_string(id) + " is blank");
  }
}

void Corpus::vectorize(const StopList& stoplist) {
  for (auto& line : lines_) line.vector = preprocess(line.text, stoplist);
}

Corpus build_corpus(std::vector<SourceFile> files, const StopList& stoplist) {
  std::stable_sort(files.begin(), files.end(),
                   [](const SourceFile& a, const SourceFile& b) { return a.name < b.name; });
  std::vector<DialogueLine> lines;
  std::vector<std::size_t> offsets;
  for (auto& file : files) {
    std::size_t first = lines.size();
    for (auto& text : file.utterances) {
      if (utf8::is_blank(text)) continue;
      lines.push_back(DialogueLine{lines.size(), std::move(text), offsets.size(), {}});
    }
    if (lines.size() > first) offsets.push_back(first);
  }
  if (lines.empty()) throw EmptyCorpusError();
  Corpus corpus(std::move(lines), std::move(offsets));
  corpus.vectorize(stoplist);
  return corpus;
}

}  // namespace srtchat
