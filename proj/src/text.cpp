#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "srtchat/errors.hpp"
#include "srtchat/text.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool all_alpha(std::string_view token) {
  return std::all_of(token.begin(), token.end(),
                     [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

TermVector::TermVector(std::vector<Entry> entries, NormState state)
    : entries_(std::move(entries)), state_(state) {}

TermVector TermVector::from_tokens(const std::vector<std::string>& tokens) {
  std::map<std::string, double> counts;
  for (const auto& t : tokens) counts[t] += 1.0;
  return TermVector({counts.begin(), counts.end()}, NormState::RawCounts);
}

double TermVector::weight(std::string_view token) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), token,
                             [](const Entry& e, std::string_view t) { return e.first < t; });
  return it != entries_.end() && it->first == token ? it->second : 0.0;
}

StopList StopList::defaults() { return parse(default_stoplist_text()); }

StopList StopList::parse(std::string_view text, std::size_t min_length) {
  StopList list;
  list.min_length = min_length;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string word = utf8::ascii_lower(utf8::trim(line));
    if (!word.empty()) list.words.insert(std::move(word));
  }
  return list;
}

StopList StopList::load(const std::filesystem::path& path, std::size_t min_length) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read stop list " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), min_length);
}

bool StopList::drops(std::string_view token) const {
  return token.size() < min_length || words.count(std::string(token)) > 0;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_alnum(c)) {
      current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens, const StopList& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stoplist.drops(t)) out.push_back(t);
  }
  return out;
}

TermVector preprocess(std::string_view text, const StopList& stoplist) {
  auto tokens = filter_tokens(tokenize(text), stoplist);
  for (auto& t : tokens) {
    if (all_alpha(t)) t = stem(t);
  }
  return TermVector::from_tokens(tokens);
}

TermVector normalize(const TermVector& v, Norm norm) {
  double total = 0.0;
  for (const auto& [token, w] : v.entries()) total += norm == Norm::L1 ? std::abs(w) : w * w;
  if (norm == Norm::L2) total = std::sqrt(total);
  const NormState state = norm == Norm::L1 ? NormState::L1 : NormState::L2;
  if (v.empty() || total == 0.0) return TermVector(v.entries(), state);
  std::vector<TermVector::Entry> out;
  out.reserve(v.size());
  for (const auto& [token, w] : v.entries()) out.emplace_back(token, w / total);
  return TermVector(std::move(out), state);
}

}  // namespace srtchat
