#pragma once

#include <cstddef>
#include <limits>
#include <string_view>

namespace srtchat {

// Edit distance over the Unicode scalar values of both strings, lowercased.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Edit distance between already-decoded strings. Uses two rows sized by the
// shorter input. When the distance exceeds `bound`, returns some value greater
// than `bound` without finishing the table.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b,
                        std::size_t bound = std::numeric_limits<std::size_t>::max());

}  // namespace srtchat
