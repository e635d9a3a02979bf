#pragma once

#include <string>
#include <string_view>

namespace srtchat::utf8 {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic. Other code points pass through.
char32_t to_lower(char32_t c) noexcept;

std::u32string lower(std::string_view text);

std::string trim(std::string_view text);
std::string ascii_lower(std::string_view text);
bool is_blank(std::string_view text) noexcept;

}  // namespace srtchat::utf8
