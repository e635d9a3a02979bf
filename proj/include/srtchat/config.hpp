#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "srtchat/search.hpp"

namespace srtchat {

// Fallback threshold when the config does not set one. Levenshtein scores are
// compared after dividing by the longer string's length.
double default_threshold(Strategy strategy) noexcept;

struct EngineConfig {
  Strategy strategy = Strategy::Levenshtein;
  SearchMode mode = SearchMode::Exhaustive;
  std::optional<double> threshold;
  std::size_t workers = 1;
  std::size_t min_length = 3;
  std::string stoplist_path;
  std::string pronoun_table_path;
  std::string knowledge_path;
  std::string learned_path;
  std::string sessions_dir;
  std::string cors_origin;
  std::string static_dir;

  double threshold_for(Strategy s) const noexcept { return threshold ? *threshold : default_threshold(s); }

  // Unknown keys are ignored. Relative paths resolve against `base_dir`.
  static EngineConfig parse(std::string_view json_text, const std::filesystem::path& base_dir = {});
  static EngineConfig load(const std::filesystem::path& path);
};

}  // namespace srtchat
