// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "hwk/corpus.hpp"
#include "hwk/textprep.hpp"

namespace hwk {

/// Vowel-group syllable estimate. English drops a silent final 'e'; Spanish
/// splits adjacent strong vowels (a, e, o and accented í, ú) into separate
/// nuclei. Words without letters count 0; words with letters count >= 1.
int count_syllables(std::string_view word, Lang lang);

struct SurfaceStats {
  double syllable_count = 0;
  double word_count = 0;
  double char_count = 0;
  double length = 0;  // codepoints summed over tokens
  double capitals = 0;
  double unique_words = 0;
  double word_density = 0;  // word_count / max(1, char_count)
  double hashtag_count = 0;
  double mention_count = 0;
  double sentence_count = 1;
};

/// Raw-text counts (characters, capitals, tags, sentences) plus token counts.
/// Syllables are counted on the cleaned surface words before stemming.
SurfaceStats surface_stats(const Tweet& tweet, const TokenSequence& tokens,
                           const CleanConfig& cfg = {});

struct Readability {
  double fre = 0;
  double fkgl = 0;
};

/// Flesch Reading Ease and Flesch-Kincaid Grade Level.
/// Throws DegenerateText when word_count or sentence_count is zero.
Readability readability(const SurfaceStats& stats);

}  // namespace hwk
