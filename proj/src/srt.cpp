#include "srtchat/srt.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "srtchat/errors.hpp"
#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::string_view kMusicNote = "\xE2\x99\xAA";

std::vector<std::string_view> split_lines(std::string_view raw) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? raw.size() : nl;
    std::string_view line = raw.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

bool blank(std::string_view line) { return utf8::is_blank(line); }

// Reads exactly `width` digits at `pos`.
bool read_digits(std::string_view s, std::size_t& pos, std::size_t width, std::int64_t& out) {
  if (pos + width > s.size()) return false;
  std::int64_t value = 0;
  for (std::size_t k = 0; k < width; ++k) {
    char c = s[pos + k];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  pos += width;
  out = value;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, std::string_view token) {
  if (s.substr(pos, token.size()) != token) return false;
  pos += token.size();
  return true;
}

// HH:MM:SS,mmm
bool read_timestamp(std::string_view s, std::size_t& pos, std::int64_t& ms) {
  std::int64_t h = 0, m = 0, sec = 0, milli = 0;
  if (!read_digits(s, pos, 2, h) || !expect(s, pos, ":") || !read_digits(s, pos, 2, m) ||
      !expect(s, pos, ":") || !read_digits(s, pos, 2, sec) || !expect(s, pos, ",") ||
      !read_digits(s, pos, 3, milli)) {
    return false;
  }
  if (m >= 60 || sec >= 60) return false;
  ms = ((h * 60 + m) * 60 + sec) * 1000 + milli;
  return true;
}

void parse_timing(std::string_view line, std::size_t line_no, SubtitleCue& cue) {
  std::string trimmed = utf8::trim(line);
  std::string_view s = trimmed;
  std::size_t pos = 0;
  if (!read_timestamp(s, pos, cue.start_ms) || !expect(s, pos, " --> ") ||
      !read_timestamp(s, pos, cue.end_ms) || pos != s.size()) {
    throw ParseError(line_no, "malformed timestamp line '" + trimmed + "'");
  }
  if (cue.start_ms > cue.end_ms) throw ParseError(line_no, "cue ends before it starts");
}

std::uint64_t parse_index(std::string_view line, std::size_t line_no) {
  std::string trimmed = utf8::trim(line);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), value);
  if (trimmed.empty() || ec != std::errc() || ptr != trimmed.data() + trimmed.size() || value == 0) {
    throw ParseError(line_no, "expected a positive cue index, got '" + trimmed + "'");
  }
  return value;
}

// Removes <...> and {...} markup.
std::string strip_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '<' || c == '{') {
      char close = c == '<' ? '>' : '}';
      std::size_t end = text.find(close, i + 1);
      if (end != std::string_view::npos) {
        i = end + 1;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string collapse_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// True when the first bracket closes exactly at the last character.
bool fully_enclosed(std::string_view text, char open, char close) {
  if (text.size() < 2 || text.front() != open || text.back() != close) return false;
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == open) ++depth;
    if (text[i] == close && --depth == 0) return i == text.size() - 1;
  }
  return false;
}

// "JOEY: hi" -> "hi". The label is one all-uppercase token.
std::string strip_speaker_label(const std::string& text) {
  std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0) return text;
  bool has_letter = false;
  for (std::size_t i = 0; i < colon; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isupper(c)) {
      has_letter = true;
    } else if (!(std::isdigit(c) || c == '\'' || c == '-' || c == '_' || c == '.')) {
      return text;
    }
  }
  if (!has_letter || !std::isupper(static_cast<unsigned char>(text[0]))) return text;
  return utf8::trim(std::string_view(text).substr(colon + 1));
}

}  // namespace

std::vector<SubtitleCue> parse_srt(std::string_view raw) {
  if (raw.substr(0, kBom.size()) == kBom) raw.remove_prefix(kBom.size());
  const auto lines = split_lines(raw);

  std::vector<SubtitleCue> cues;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (blank(lines[i])) {
      ++i;
      continue;
    }
    SubtitleCue cue;
    cue.index = parse_index(lines[i], i + 1);
    ++i;
    if (i >= lines.size()) throw ParseError(i + 1, "missing timestamp line");
    parse_timing(lines[i], i + 1, cue);
    ++i;
    while (i < lines.size() && !blank(lines[i])) {
      cue.lines.emplace_back(lines[i]);
      ++i;
    }
    // An empty payload becomes one empty line; the cleaner drops it.
    if (cue.lines.empty()) cue.lines.emplace_back();
    cues.push_back(std::move(cue));
  }
  return cues;
}

std::string format_timestamp(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld",
                static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
  return buf;
}

std::string format_srt(const std::vector<SubtitleCue>& cues) {
  std::string out;
  for (const auto& cue : cues) {
    out += std::to_string(cue.index);
    out += '\n';
    out += format_timestamp(cue.start_ms);
    out += " --> ";
    out += format_timestamp(cue.end_ms);
    out += '\n';
    for (const auto& line : cue.lines) {
      out += line;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string clean_cue(const SubtitleCue& cue) {
  std::string joined;
  for (const auto& line : cue.lines) {
    std::string t = utf8::trim(line);
    if (t.empty()) continue;
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  std::string text = utf8::trim(collapse_spaces(strip_tags(joined)));
  text = strip_speaker_label(text);
  if (text.empty()) return {};
  if (fully_enclosed(text, '[', ']') || fully_enclosed(text, '(', ')')) return {};
  if (std::string_view(text).substr(0, kMusicNote.size()) == kMusicNote) return {};
  return text;
}

std::vector<std::string> clean_cues(const std::vector<SubtitleCue>& cues, CleanStats* stats) {
  std::vector<std::string> out;
  out.reserve(cues.size());
  CleanStats local;
  for (const auto& cue : cues) {
    std::string text = clean_cue(cue);
    if (text.empty()) {
      ++local.dropped;
    } else {
      ++local.kept;
      out.push_back(std::move(text));
    }
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace srtchat
