#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace srtchat {

// One SubRip block. Times are milliseconds from zero.
struct SubtitleCue {
  std::uint64_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> lines;

  friend bool operator==(const SubtitleCue&, const SubtitleCue&) = default;
};

// Parses SRT text (LF or CRLF, optional BOM). Throws ParseError with the
// 1-based line number on a bad index or timestamp line.
std::vector<SubtitleCue> parse_srt(std::string_view raw);

// Writes cues back in canonical SRT form.
std::string format_srt(const std::vector<SubtitleCue>& cues);

std::string format_timestamp(std::int64_t ms);

struct CleanStats {
  std::size_t kept = 0;
  std::size_t dropped = 0;
};

// Reduces one cue to a dialogue utterance, or "" when the cue is noise.
std::string clean_cue(const SubtitleCue& cue);

// Drops noise cues and returns the surviving utterances in order.
std::vector<std::string> clean_cues(const std::vector<SubtitleCue>& cues, CleanStats* stats = nullptr);

}  // namespace srtchat
