#include "srtchat/levenshtein.hpp"

#include <algorithm>
#include <vector>

#include "srtchat/utf8.hpp"

namespace srtchat {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(utf8::lower(a)), std::u32string_view(utf8::lower(b)));
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b, std::size_t bound) {
  if (a.size() < b.size()) std::swap(a, b);
  // b is now the shorter string and sizes the rows.
  const std::size_t rows = a.size();
  const std::size_t cols = b.size();
  if (rows - cols > bound) return rows - cols;
  if (cols == 0) return rows;

  thread_local std::vector<std::size_t> prev;
  thread_local std::vector<std::size_t> cur;
  prev.resize(cols + 1);
  cur.resize(cols + 1);
  for (std::size_t j = 0; j <= cols; ++j) prev[j] = j;

  for (std::size_t i = 1; i <= rows; ++i) {
    cur[0] = i;
    std::size_t row_min = i;
    const char32_t ca = a[i - 1];
    for (std::size_t j = 1; j <= cols; ++j) {
      const std::size_t substitution = prev[j - 1] + (ca == b[j - 1] ? 0 : 1);
      const std::size_t deletion = prev[j] + 1;
      const std::size_t insertion = cur[j - 1] + 1;
      cur[j] = std::min({substitution, deletion, insertion});
      row_min = std::min(row_min, cur[j]);
    }
    // Row minima never decrease, so the final distance is at least row_min.
    if (row_min > bound) return row_min;
    std::swap(prev, cur);
  }
  return prev[cols];
}

}  // namespace srtchat
