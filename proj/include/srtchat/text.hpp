#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace srtchat {

enum class Norm { L1, L2 };
enum class NormState { RawCounts, L1, L2 };

// Token -> weight, kept sorted by token so two vectors merge in one pass.
class TermVector {
 public:
  using Entry = std::pair<std::string, double>;

  TermVector() = default;
  // `entries` must be sorted by token and duplicate-free.
  TermVector(std::vector<Entry> entries, NormState state);

  static TermVector from_tokens(const std::vector<std::string>& tokens);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  NormState state() const noexcept { return state_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  double weight(std::string_view token) const noexcept;
  bool contains(std::string_view token) const noexcept { return weight(token) != 0.0; }

  friend bool operator==(const TermVector&, const TermVector&) = default;

 private:
  std::vector<Entry> entries_;
  NormState state_ = NormState::RawCounts;
};

struct StopList {
  std::unordered_set<std::string> words;
  std::size_t min_length = 3;

  // The bundled English function-word list.
  static StopList defaults();
  // One word per line; '#' starts a comment.
  static StopList parse(std::string_view text, std::size_t min_length = 3);
  static StopList load(const std::filesystem::path& path, std::size_t min_length = 3);

  bool drops(std::string_view token) const;
};

// Raw text of the bundled stop-word file.
std::string_view default_stoplist_text() noexcept;

std::vector<std::string> tokenize(std::string_view text);
std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens, const StopList& stoplist);

// Porter suffix stripping, following the published rule set without
// later extensions. Expects a lowercase token.
std::string stem(std::string_view token);

// tokenize -> filter -> stem -> count. Tokens containing digits are counted unstemmed.
TermVector preprocess(std::string_view text, const StopList& stoplist);

TermVector normalize(const TermVector& v, Norm norm);

}  // namespace srtchat
