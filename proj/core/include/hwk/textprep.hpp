// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hwk/corpus.hpp"

namespace hwk {

struct CleanConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_punctuation = true;
  /// Keep '#'/'@' through punctuation stripping so the tag body survives as
  /// a token; when false the whole tag is removed from the text.
  bool keep_hashtag_body = true;
  bool keep_mention_body = true;
  /// Character runs longer than this are truncated to it (must be >= 2).
  std::optional<int> collapse_repeats = 3;
  bool remove_stopwords = false;

  /// Throws InvalidArgument when collapse_repeats < 2.
  void validate() const;
};

struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_id;
  std::vector<std::string> kept_hashtags;  // each starts with '#', case-folded
  std::vector<std::string> kept_mentions;  // each starts with '@', case-folded
};

/// Normalizes raw tweet text. Total and idempotent: clean(clean(x)) == clean(x).
///
/// Control characters and unassigned codepoints are dropped, http(s) URLs
/// removed, Unicode punctuation (category P) removed, pictographs isolated
/// as standalone tokens, long runs truncated and whitespace collapsed.
std::string clean(std::string_view text, const CleanConfig& cfg);

/// Splits on runs of Unicode whitespace; never yields empty tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Snowball stem of a lowercase token.
std::string stem(std::string_view token, Lang lang);

/// Short function-word list of the language (surface forms).
const std::unordered_set<std::string>& stopwords(Lang lang);
bool is_stopword(std::string_view token, Lang lang);

/// Hashtags ('#' + word characters, not preceded by a word character),
/// case-folded, in order of appearance. Mentions likewise with '@'.
std::vector<std::string> extract_hashtags(std::string_view text);
std::vector<std::string> extract_mentions(std::string_view text);

/// clean -> tokenize -> stem. Tags are extracted from the raw text first.
TokenSequence preprocess(const Tweet& tweet, const CleanConfig& cfg);

/// Cleaned, unstemmed tokens: the surface words used by the audit tools.
std::vector<std::string> surface_tokens(std::string_view text, const CleanConfig& cfg = {});

}  // namespace hwk
