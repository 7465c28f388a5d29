// SPDX-License-Identifier: Apache-2.0
#include "hwk/features/surface.hpp"

#include <set>
#include <string>

#include "hwk/error.hpp"
#include "hwk/unicode.hpp"

namespace hwk {

namespace {

// Vowels with their accented variants folded to the base letter.
char32_t fold_vowel(char32_t c) {
  switch (c) {
    case U'a': case U'á': case U'à': case U'â': case U'ä': return U'a';
    case U'e': case U'é': case U'è': case U'ê': case U'ë': return U'e';
    case U'i': case U'í': case U'ì': case U'î': case U'ï': return U'i';
    case U'o': case U'ó': case U'ò': case U'ô': case U'ö': return U'o';
    case U'u': case U'ú': case U'ù': case U'û': case U'ü': return U'u';
    case U'y': return U'y';
    default: return 0;
  }
}

int english_syllables(const std::u32string& w) {
  int groups = 0;
  bool in_vowel = false;
  for (char32_t c : w) {
    const bool v = fold_vowel(c) != 0;
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  // Silent final 'e' ("make"), but not the syllabic "-le" after a consonant ("table").
  const std::size_t n = w.size();
  if (groups > 1 && n >= 2 && w[n - 1] == U'e' && fold_vowel(w[n - 2]) == 0) {
    const bool syllabic_le = n >= 3 && w[n - 2] == U'l' && fold_vowel(w[n - 3]) == 0;
    if (!syllabic_le) --groups;
  }
  return groups;
}

bool spanish_strong(char32_t c) {
  switch (c) {
    case U'a': case U'e': case U'o': case U'á': case U'é': case U'ó':
    case U'í': case U'ú':  // an accent on a weak vowel breaks the diphthong
      return true;
    default:
      return false;
  }
}

bool spanish_vowel(const std::u32string& w, std::size_t i) {
  const char32_t c = w[i];
  if (c == U'y') return i + 1 == w.size();  // final y is a vowel ("hoy", "muy")
  return fold_vowel(c) != 0;
}

int spanish_syllables(const std::u32string& w) {
  int count = 0;
  for (std::size_t i = 0; i < w.size();) {
    if (!spanish_vowel(w, i)) {
      ++i;
      continue;
    }
    ++count;
    std::size_t j = i + 1;
    for (; j < w.size() && spanish_vowel(w, j); ++j)
      if (spanish_strong(w[j - 1]) && spanish_strong(w[j])) ++count;  // hiatus
    i = j;
  }
  return count;
}

}  // namespace

int count_syllables(std::string_view word, Lang lang) {
  const auto w = unicode::to_lower(unicode::decode_lossy(word));
  bool has_letter = false;
  for (char32_t c : w) has_letter = has_letter || unicode::is_letter(c);
  if (!has_letter) return 0;
  const int n = lang == Lang::EN ? english_syllables(w) : spanish_syllables(w);
  return n < 1 ? 1 : n;
}

SurfaceStats surface_stats(const Tweet& tweet, const TokenSequence& tokens, const CleanConfig& cfg) {
  SurfaceStats s;
  const auto raw = unicode::decode_lossy(tweet.text);
  s.char_count = static_cast<double>(raw.size());

  int terminal_runs = 0;
  bool in_terminal = false;
  for (char32_t c : raw) {
    if (unicode::is_upper(c)) s.capitals += 1;
    const bool term = c == U'.' || c == U'!' || c == U'?' || c == U'…';
    if (term && !in_terminal) ++terminal_runs;
    in_terminal = term;
  }
  s.sentence_count = terminal_runs > 0 ? terminal_runs : 1;
  s.hashtag_count = static_cast<double>(extract_hashtags(tweet.text).size());
  s.mention_count = static_cast<double>(extract_mentions(tweet.text).size());

  std::set<std::string> distinct;
  for (const auto& t : tokens.tokens) {
    s.length += static_cast<double>(unicode::length(t));
    distinct.insert(t);
  }
  s.word_count = static_cast<double>(tokens.tokens.size());
  s.unique_words = static_cast<double>(distinct.size());
  s.word_density = s.word_count / std::max(1.0, s.char_count);

  if (!tokens.tokens.empty()) {
    for (const auto& w : surface_tokens(tweet.text, cfg)) s.syllable_count += count_syllables(w, tweet.lang);
  }
  return s;
}

Readability readability(const SurfaceStats& stats) {
  if (stats.word_count <= 0 || stats.sentence_count <= 0)
    throw Error(Errc::DegenerateText, "readability needs at least one word and one sentence");
  const double wps = stats.word_count / stats.sentence_count;
  const double spw = stats.syllable_count / stats.word_count;
  return {206.835 - 1.015 * wps - 84.6 * spw, 0.39 * wps + 11.8 * spw - 15.59};
}

}  // namespace hwk
