#include "srtchat/session.hpp"

#include <cstdio>
#include <ctime>

#include "srtchat/utf8.hpp"

namespace srtchat {
namespace {

bool digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

Timestamp now_ms() { return std::chrono::time_point_cast<std::chrono::milliseconds>(Clock::now()); }

std::string format_rfc3339(Timestamp t) {
  const auto ms = t.time_since_epoch().count();
  auto secs = static_cast<std::time_t>(ms / 1000);
  auto frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(frac));
  return buf;
}

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
  int year, month, day, hour, minute, second;
  if (!digits(s, 0, 4, year) || s.size() < 20 || s[4] != '-' || !digits(s, 5, 2, month) || s[7] != '-' ||
      !digits(s, 8, 2, day) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') || !digits(s, 11, 2, hour) ||
      s[13] != ':' || !digits(s, 14, 2, minute) || s[16] != ':' || !digits(s, 17, 2, second)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  long millis = 0;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    long scale = 100;
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
      millis += (s[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) return std::nullopt;
  }
  long offset_minutes = 0;
  if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    int oh, om;
    if (!digits(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' || !digits(s, pos + 4, 2, om)) {
      return std::nullopt;
    }
    offset_minutes = (oh * 60 + om) * (s[pos] == '-' ? -1 : 1);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size() || month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second > 60) {
    return std::nullopt;
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  const std::int64_t epoch = static_cast<std::int64_t>(timegm(&tm)) - offset_minutes * 60;
  return Timestamp(std::chrono::milliseconds(epoch * 1000 + millis));
}

std::string_view to_string(Speaker speaker) noexcept { return speaker == Speaker::User ? "user" : "bot"; }

std::optional<LearnedPair> learn_from_turn(const Session& session) {
  const auto& t = session.transcript;
  if (t.size() < 3) return std::nullopt;
  const auto& user = t[t.size() - 1];
  const auto& bot = t[t.size() - 2];
  if (user.speaker != Speaker::User || bot.speaker != Speaker::Bot) return std::nullopt;
  if (utf8::is_blank(user.text) || utf8::is_blank(bot.text) || user.text == bot.text) return std::nullopt;
  return LearnedPair{bot.text, user.text, session.id, user.at};
}

std::vector<LearnedPair> replay_learned(std::string_view session_id, const std::vector<TranscriptEntry>& transcript) {
  std::vector<LearnedPair> out;
  Session prefix;
  prefix.id = std::string(session_id);
  for (const auto& entry : transcript) {
    prefix.transcript.push_back(entry);
    if (entry.speaker != Speaker::User) continue;
    if (auto pair = learn_from_turn(prefix)) out.push_back(std::move(*pair));
  }
  return out;
}

}  // namespace srtchat
