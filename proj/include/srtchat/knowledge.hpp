#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace srtchat {

enum class QueryKindTag { WhoIs, WhatIs, WhenIs, None };

struct QueryKind {
  QueryKindTag kind = QueryKindTag::None;
  std::string entity;  // as typed; empty when kind is None

  friend bool operator==(const QueryKind&, const QueryKind&) = default;
};

// Fixture spelling: "who", "what", "when".
std::string_view to_string(QueryKindTag kind) noexcept;
std::optional<QueryKindTag> parse_query_kind(std::string_view name) noexcept;

// Recognises "who is X", "what is X" and "when is X [celebrated]", with an
// optional trailing '?'. Prefix matching is case-insensitive.
QueryKind classify_query(std::string_view text);

class KnowledgeProvider {
 public:
  virtual ~KnowledgeProvider() = default;
  // `entity_key` is trimmed and lowercased.
  virtual std::optional<std::string> find(QueryKindTag kind, std::string_view entity_key) const = 0;
};

// Answers from a JSON array of {"kind", "entity", "answer"} records.
class FixtureKnowledgeProvider : public KnowledgeProvider {
 public:
  FixtureKnowledgeProvider() = default;
  static FixtureKnowledgeProvider parse(std::string_view json_text);
  static FixtureKnowledgeProvider load(const std::filesystem::path& path);

  void add(QueryKindTag kind, std::string_view entity, std::string answer);
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::string> find(QueryKindTag kind, std::string_view entity_key) const override;

 private:
  std::map<std::pair<QueryKindTag, std::string>, std::string, std::less<>> entries_;
};

// Renders "ENTITY is ANSWER." or "ENTITY is celebrated on ANSWER.";
// nullopt when the provider has no entry. Never called for kind None.
std::optional<std::string> lookup(const KnowledgeProvider& provider, const QueryKind& query);

}  // namespace srtchat
