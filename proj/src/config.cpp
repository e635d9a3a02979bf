#include "srtchat/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "srtchat/errors.hpp"

namespace srtchat {
namespace {

std::string resolve(const nlohmann::json& doc, const char* key, const std::filesystem::path& base) {
  if (!doc.contains(key) || doc[key].is_null()) return {};
  std::filesystem::path p = doc[key].get<std::string>();
  if (p.empty() || p.is_absolute() || base.empty()) return p.string();
  return (base / p).lexically_normal().string();
}

}  // namespace

double default_threshold(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::Levenshtein:
      return 0.5;
    case Strategy::BowL1:
    case Strategy::BowL2:
      return 0.35;
  }
  return 0.5;
}

EngineConfig EngineConfig::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.byte, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError(0, "config must be a JSON object");

  EngineConfig cfg;
  try {
    if (doc.contains("strategy")) {
      auto s = parse_strategy(doc["strategy"].get<std::string>());
      if (!s) throw InvalidInputError("unknown strategy " + doc["strategy"].dump());
      cfg.strategy = *s;
    }
    if (doc.contains("mode")) {
      auto m = parse_mode(doc["mode"].get<std::string>());
      if (!m) throw InvalidInputError("unknown mode " + doc["mode"].dump());
      cfg.mode = *m;
    }
    if (doc.contains("threshold") && !doc["threshold"].is_null()) {
      cfg.threshold = doc["threshold"].get<double>();
      if (*cfg.threshold < 0) throw InvalidInputError("threshold must be non-negative");
    }
    if (doc.contains("workers")) {
      const auto w = doc["workers"].get<long long>();
      if (w < 1) throw InvalidInputError("workers must be at least 1");
      cfg.workers = static_cast<std::size_t>(w);
    }
    if (doc.contains("min_length")) {
      const auto n = doc["min_length"].get<long long>();
      if (n < 1) throw InvalidInputError("min_length must be at least 1");
      cfg.min_length = static_cast<std::size_t>(n);
    }
    cfg.stoplist_path = resolve(doc, "stoplist_path", base_dir);
    cfg.pronoun_table_path = resolve(doc, "pronoun_table_path", base_dir);
    cfg.knowledge_path = resolve(doc, "knowledge_path", base_dir);
    cfg.learned_path = resolve(doc, "learned_path", base_dir);
    cfg.sessions_dir = resolve(doc, "sessions_dir", base_dir);
    cfg.static_dir = resolve(doc, "static_dir", base_dir);
    cfg.cors_origin = doc.value("cors_origin", "");
  } catch (const nlohmann::json::type_error& e) {
    throw InvalidInputError(std::string("config has a field of the wrong type: ") + e.what());
  }
  return cfg;
}

EngineConfig EngineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.parent_path());
}

}  // namespace srtchat
