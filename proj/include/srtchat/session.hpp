#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srtchat/search.hpp"

namespace srtchat {

using Clock = std::chrono::system_clock;
using Timestamp = std::chrono::time_point<Clock, std::chrono::milliseconds>;

Timestamp now_ms();
// "2026-10-17T08:15:30.250Z"
std::string format_rfc3339(Timestamp t);
// Accepts a 'Z' or ±HH:MM offset and optional fractional seconds.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

enum class Speaker { User, Bot };

std::string_view to_string(Speaker speaker) noexcept;

struct TranscriptEntry {
  Speaker speaker = Speaker::User;
  std::string text;
  Timestamp at{};

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct Session {
  std::string id;
  std::vector<TranscriptEntry> transcript;  // alternates, user first
  Strategy strategy = Strategy::Levenshtein;
  double threshold = 0.5;
};

// A bot utterance and the human reply that followed it.
struct LearnedPair {
  std::string prompt;
  std::string response;
  std::string session_id;
  Timestamp created_at{};

  friend bool operator==(const LearnedPair&, const LearnedPair&) = default;
};

// Emits (bot B -> user U) when the transcript ends "..., bot B, user U" with
// at least three entries, U non-blank and U != B. created_at is U's timestamp.
std::optional<LearnedPair> learn_from_turn(const Session& session);

// Every pair learn_from_turn would have emitted over the transcript's history.
std::vector<LearnedPair> replay_learned(std::string_view session_id, const std::vector<TranscriptEntry>& transcript);

}  // namespace srtchat
