// SPDX-License-Identifier: Apache-2.0
// Shared machinery for the Snowball-style stemmers: a word buffer plus
// longest-suffix lookup over rule tables.
#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace hwk::snowball {

struct Rule {
  std::u32string_view suffix;
  int action;
};

struct Match {
  int action;
  std::size_t start;  // index where the matched suffix begins
};

inline bool ends_with_at(std::u32string_view word, std::size_t end, std::u32string_view suffix) {
  return suffix.size() <= end && word.substr(end - suffix.size(), suffix.size()) == suffix;
}

/// Longest rule whose suffix ends at `end` and starts at or after `floor`.
inline std::optional<Match> longest_suffix(std::u32string_view word, std::span<const Rule> rules,
                                           std::size_t end, std::size_t floor = 0) {
  std::optional<Match> best;
  std::size_t best_len = 0;
  for (const auto& r : rules) {
    if (!ends_with_at(word, end, r.suffix)) continue;
    if (end - r.suffix.size() < floor) continue;
    if (!best || r.suffix.size() > best_len) {
      best = Match{r.action, end - r.suffix.size()};
      best_len = r.suffix.size();
    }
  }
  return best;
}

inline bool in_set(char32_t c, std::u32string_view set) {
  return set.find(c) != std::u32string_view::npos;
}

/// Standard region: index after the first non-vowel that follows a vowel,
/// searching from `from`. Returns word.size() when there is none.
inline std::size_t region_after(std::u32string_view word, std::size_t from, std::u32string_view vowels) {
  std::size_t i = from;
  while (i < word.size() && !in_set(word[i], vowels)) ++i;
  while (i < word.size() && in_set(word[i], vowels)) ++i;
  return i < word.size() ? i + 1 : word.size();
}

}  // namespace hwk::snowball
