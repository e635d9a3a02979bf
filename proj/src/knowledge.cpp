#include "srtchat/knowledge.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

std::string entity_key(std::string_view entity) { return utf8::ascii_lower(utf8::trim(entity)); }

bool is_space(char c) { return c == ' ' || c == '\t'; }

}  // namespace

std::string_view to_string(QueryKindTag kind) noexcept {
  switch (kind) {
    case QueryKindTag::WhoIs:
      return "who";
    case QueryKindTag::WhatIs:
      return "what";
    case QueryKindTag::WhenIs:
      return "when";
    case QueryKindTag::None:
      return "none";
  }
  return "none";
}

std::optional<QueryKindTag> parse_query_kind(std::string_view name) noexcept {
  if (name == "who") return QueryKindTag::WhoIs;
  if (name == "what") return QueryKindTag::WhatIs;
  if (name == "when") return QueryKindTag::WhenIs;
  return std::nullopt;
}

QueryKind classify_query(std::string_view text) {
  const std::string trimmed = utf8::trim(text);
  const std::string lowered = utf8::ascii_lower(trimmed);

  static constexpr std::pair<std::string_view, QueryKindTag> kPrefixes[] = {
      {"who", QueryKindTag::WhoIs}, {"what", QueryKindTag::WhatIs}, {"when", QueryKindTag::WhenIs}};
  for (const auto& [word, kind] : kPrefixes) {
    std::size_t pos = word.size();
    if (lowered.compare(0, pos, word) != 0 || pos >= lowered.size() || !is_space(lowered[pos])) continue;
    while (pos < lowered.size() && is_space(lowered[pos])) ++pos;
    if (lowered.compare(pos, 2, "is") != 0 || pos + 2 >= lowered.size() || !is_space(lowered[pos + 2])) continue;
    pos += 2;

    std::string entity = utf8::trim(std::string_view(trimmed).substr(pos));
    if (!entity.empty() && entity.back() == '?') entity = utf8::trim(std::string_view(entity).substr(0, entity.size() - 1));
    if (kind == QueryKindTag::WhenIs) {
      constexpr std::string_view kCelebrated = " celebrated";
      const std::string lower_entity = utf8::ascii_lower(entity);
      if (lower_entity.size() > kCelebrated.size() &&
          lower_entity.compare(lower_entity.size() - kCelebrated.size(), kCelebrated.size(), kCelebrated) == 0) {
        entity = utf8::trim(std::string_view(entity).substr(0, entity.size() - kCelebrated.size()));
      }
    }
    if (entity.empty()) return {};
    return QueryKind{kind, std::move(entity)};
  }
  return {};
}

FixtureKnowledgeProvider FixtureKnowledgeProvider::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.byte, std::string("knowledge fixture is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError(0, "knowledge fixture must be a JSON array");
  FixtureKnowledgeProvider provider;
  for (const auto& record : doc) {
    const auto kind = parse_query_kind(record.value("kind", ""));
    const auto entity = record.value("entity", "");
    if (!kind || utf8::is_blank(entity) || !record.contains("answer") || !record["answer"].is_string()) {
      throw FormatError(0, "bad knowledge record: " + record.dump());
    }
    provider.add(*kind, entity, record["answer"].get<std::string>());
  }
  return provider;
}

FixtureKnowledgeProvider FixtureKnowledgeProvider::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read knowledge fixture " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void FixtureKnowledgeProvider::add(QueryKindTag kind, std::string_view entity, std::string answer) {
  entries_[{kind, entity_key(entity)}] = std::move(answer);
}

std::optional<std::string> FixtureKnowledgeProvider::find(QueryKindTag kind, std::string_view key) const {
  auto it = entries_.find(std::pair<QueryKindTag, std::string>{kind, std::string(key)});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> lookup(const KnowledgeProvider& provider, const QueryKind& query) {
  if (query.kind == QueryKindTag::None) return std::nullopt;
  auto answer = provider.find(query.kind, entity_key(query.entity));
  if (!answer) return std::nullopt;
  if (query.kind == QueryKindTag::WhenIs) return query.entity + " is celebrated on " + *answer + ".";
  return query.entity + " is " + *answer + ".";
}

}  // namespace srtchat
