#include "srtchat/engine.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

bool sentence_start(std::string_view text, std::size_t pos) {
  while (pos > 0) {
    const char c = text[--pos];
    if (c == '.' || c == '!' || c == '?') return true;
    if (c != ' ' && c != '\t' && c != '"' && c != '\'' && c != '(') return false;
  }
  return true;
}

// "I" is capitalized regardless of position, so it only says something about
// case at the start of a sentence.
std::string with_case_of(std::string_view text, std::size_t pos, std::string_view original,
                         std::string_view replacement) {
  std::string out(replacement);
  if (out == "i") return "I";
  const auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  const bool all_caps = original.size() > 1 && std::all_of(original.begin(), original.end(), upper);
  const bool initial_cap = original == "I" ? sentence_start(text, pos) : upper(original.front());
  if (all_caps) {
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (initial_cap) {
    out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
  }
  return out;
}

struct ReplyInputs {
  const Corpus& corpus;
  const std::vector<LearnedPair>& learned;
  const SearchDomain& domain;
  const KnowledgeProvider* knowledge;
  const PronounTable& pronouns;
  SearchOptions search;
  double threshold;
};

Reply compose_reply(std::string_view user_text, const ReplyInputs& in) {
  if (in.knowledge) {
    const QueryKind kind = classify_query(user_text);
    if (kind.kind != QueryKindTag::None) {
      if (auto answer = lookup(*in.knowledge, kind)) return Reply{std::move(*answer), Provenance::Knowledge, {}, {}};
    }
  }

  if (auto match = best_match(user_text, in.domain, in.search)) {
    const std::size_t n = in.corpus.size();
    const bool from_corpus = match->line_id < n;
    const std::string& prompt = from_corpus ? in.corpus.line(match->line_id).text : in.learned.at(match->line_id - n).prompt;
    const double gated = gated_score(*match, utf8::lower(user_text), utf8::lower(prompt));
    if (gated <= in.threshold) {
      if (from_corpus) {
        return Reply{in.corpus.reply_to(match->line_id).text, Provenance::Corpus, match, prompt};
      }
      return Reply{in.learned.at(match->line_id - n).response, Provenance::Learned, match, prompt};
    }
  }

  return Reply{pronoun_swap(user_text, in.pronouns), Provenance::PronounSwap, {}, {}};
}

}  // namespace

PronounTable::PronounTable(const std::vector<std::pair<std::string, std::string>>& pairs) : pairs_(pairs) {
  for (const auto& [left, right] : pairs_) {
    map_.try_emplace(left, right);
    map_.try_emplace(right, left);
  }
}

PronounTable PronounTable::defaults() { return parse(default_pronoun_table_text()); }

PronounTable PronounTable::parse(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string left, right, extra;
    if (!(fields >> left)) continue;
    if (!(fields >> right) || (fields >> extra)) {
      throw InvalidInputError("pronoun table line " + std::to_string(line_no) + " needs exactly two words");
    }
    pairs.emplace_back(utf8::ascii_lower(left), utf8::ascii_lower(right));
  }
  return PronounTable(pairs);
}

PronounTable PronounTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read pronoun table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string_view> PronounTable::partner(std::string_view word) const {
  auto it = map_.find(std::string(word));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string pronoun_swap(std::string_view text, const PronounTable& table) {
  std::string out;
  out.reserve(text.size() + 8);
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_letter(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && is_letter(text[end])) ++end;
    const std::string_view word = text.substr(i, end - i);
    if (auto partner = table.partner(utf8::ascii_lower(word))) {
      out += with_case_of(text, i, word, *partner);
    } else {
      out += word;
    }
    i = end;
  }
  return out;
}

std::string_view to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::Corpus:
      return "corpus";
    case Provenance::Learned:
      return "learned";
    case Provenance::Knowledge:
      return "knowledge";
    case Provenance::PronounSwap:
      return "pronoun-swap";
  }
  return "?";
}

SearchDomain merged_search_domain(const Corpus& corpus, const std::vector<LearnedPair>& learned,
                                  const StopList& stoplist) {
  SearchDomain domain(corpus, stoplist);
  for (std::size_t k = 0; k < learned.size(); ++k) domain.add(corpus.size() + k, learned[k].prompt);
  return domain;
}

double gated_score(const MatchResult& match, std::u32string_view query, std::u32string_view line) {
  if (match.strategy != Strategy::Levenshtein) return match.score;
  const std::size_t longest = std::max(query.size(), line.size());
  return longest == 0 ? 0.0 : match.score / static_cast<double>(longest);
}

Reply respond(Session& session, std::string_view user_text, const Corpus& corpus,
              const std::vector<LearnedPair>& learned, const RespondContext& context) {
  if (utf8::is_blank(user_text)) throw InvalidInputError("empty input");
  const StopList stoplist = context.stoplist ? *context.stoplist : StopList::defaults();
  const PronounTable pronouns = context.pronouns ? *context.pronouns : PronounTable::defaults();
  const SearchDomain domain = merged_search_domain(corpus, learned, stoplist);

  session.transcript.push_back({Speaker::User, std::string(user_text), now_ms()});
  Reply reply = compose_reply(
      user_text, ReplyInputs{corpus, learned, domain, context.knowledge, pronouns,
                             SearchOptions{session.strategy, context.mode, std::max<std::size_t>(1, context.workers)},
                             session.threshold});
  session.transcript.push_back({Speaker::Bot, reply.text, now_ms()});
  return reply;
}

Engine::Engine(Corpus corpus, EngineConfig config, StopList stoplist, PronounTable pronouns,
               std::shared_ptr<const KnowledgeProvider> knowledge)
    : corpus_(std::move(corpus)),
      config_(std::move(config)),
      stoplist_(std::move(stoplist)),
      pronouns_(std::move(pronouns)),
      knowledge_(std::move(knowledge)),
      domain_(corpus_, stoplist_) {}

std::unique_ptr<Engine> Engine::create(Corpus corpus, const EngineConfig& config) {
  StopList stoplist = config.stoplist_path.empty() ? StopList::defaults()
                                                   : StopList::load(config.stoplist_path, config.min_length);
  stoplist.min_length = config.min_length;
  PronounTable pronouns =
      config.pronoun_table_path.empty() ? PronounTable::defaults() : PronounTable::load(config.pronoun_table_path);
  std::shared_ptr<const KnowledgeProvider> knowledge;
  if (!config.knowledge_path.empty()) {
    knowledge = std::make_shared<FixtureKnowledgeProvider>(FixtureKnowledgeProvider::load(config.knowledge_path));
  }
  corpus.vectorize(stoplist);
  return std::make_unique<Engine>(std::move(corpus), config, std::move(stoplist), std::move(pronouns),
                                  std::move(knowledge));
}

void Engine::add_learned(const LearnedPair& pair) {
  if (utf8::is_blank(pair.prompt) || utf8::is_blank(pair.response)) {
    throw InvalidInputError("learned pairs need a non-blank prompt and response");
  }
  std::unique_lock lock(mutex_);
  domain_.add(corpus_.size() + learned_.size(), pair.prompt);
  learned_.push_back(pair);
}

Session Engine::new_session(std::string id) const {
  Session session;
  session.id = std::move(id);
  session.strategy = config_.strategy;
  session.threshold = config_.threshold_for(config_.strategy);
  return session;
}

TurnResult Engine::turn(Session& session, std::string_view user_text, const TurnOverrides& overrides) {
  if (utf8::is_blank(user_text)) throw InvalidInputError("empty input");
  TurnResult result;

  session.transcript.push_back({Speaker::User, std::string(user_text), now_ms()});
  if (auto pair = learn_from_turn(session)) {
    if (sink_) sink_(*pair);
    add_learned(*pair);
    result.learned = std::move(pair);
  }

  const Strategy strategy = overrides.strategy.value_or(session.strategy);
  double threshold = session.threshold;
  if (overrides.threshold) {
    threshold = *overrides.threshold;
  } else if (overrides.strategy && !config_.threshold) {
    threshold = default_threshold(strategy);
  }
  {
    std::shared_lock lock(mutex_);
    result.reply = compose_reply(user_text, ReplyInputs{corpus_, learned_, domain_, knowledge_.get(), pronouns_,
                                                        SearchOptions{strategy, config_.mode, config_.workers},
                                                        threshold});
  }
  session.transcript.push_back({Speaker::Bot, result.reply.text, now_ms()});
  return result;
}

EngineStats Engine::stats() const {
  std::shared_lock lock(mutex_);
  return {corpus_.size(), learned_.size(), corpus_.episodes()};
}

std::vector<LearnedPair> Engine::learned() const {
  std::shared_lock lock(mutex_);
  return learned_;
}

}  // namespace srtchat
