// SPDX-License-Identifier: Apache-2.0
#include "hwk/textprep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <unordered_set>

#include "hwk/error.hpp"
#include "hwk/unicode.hpp"

namespace hwk {

namespace detail {
std::u32string stem_english(std::u32string word);
std::u32string stem_spanish(std::u32string word);
}  // namespace detail

namespace {

using unicode::is_word;

bool starts_with_ci(std::u32string_view s, std::size_t at, std::u32string_view prefix) {
  if (at + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (unicode::to_lower(s[at + i]) != prefix[i]) return false;
  return true;
}

// True when a '#'/'@' at `i` opens a tag: not glued to a preceding word and
// followed by at least one word character.
bool opens_tag(std::u32string_view s, std::size_t i) {
  if (i > 0 && is_word(s[i - 1])) return false;
  return i + 1 < s.size() && is_word(s[i + 1]);
}

std::u32string drop_bad_characters(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (unicode::is_control(c)) {
      if (unicode::is_whitespace(c)) out.push_back(U' ');
      continue;
    }
    if (unicode::is_unassigned(c)) continue;
    out.push_back(c);
  }
  return out;
}

std::u32string drop_urls(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const bool at_boundary = i == 0 || !is_word(s[i - 1]);
    std::size_t scheme = 0;
    if (at_boundary) {
      if (starts_with_ci(s, i, U"https://")) scheme = 8;
      else if (starts_with_ci(s, i, U"http://")) scheme = 7;
    }
    if (scheme == 0) {
      out.push_back(s[i++]);
      continue;
    }
    i += scheme;
    while (i < s.size() && !unicode::is_whitespace(s[i])) ++i;
    out.push_back(U' ');
  }
  return out;
}

std::u32string drop_tags(std::u32string_view s, char32_t sigil) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == sigil && opens_tag(s, i)) {
      ++i;
      while (i < s.size() && is_word(s[i])) ++i;
      out.push_back(U' ');
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::u32string drop_punctuation(std::u32string_view s, const CleanConfig& cfg) {
  std::u32string out;
  out.reserve(s.size());
  for (char32_t c : s) {
    if (c == U'#' && cfg.keep_hashtag_body) {
      out.push_back(c);
      continue;
    }
    if (c == U'@' && cfg.keep_mention_body) {
      out.push_back(c);
      continue;
    }
    if (unicode::is_punctuation(c)) continue;
    out.push_back(c);
  }
  return out;
}

std::u32string isolate_pictographs(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + 8);
  for (char32_t c : s) {
    if (unicode::is_pictographic(c)) {
      out.push_back(U' ');
      out.push_back(c);
      out.push_back(U' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::u32string collapse_runs(std::u32string_view s, int max_run) {
  std::u32string out;
  out.reserve(s.size());
  int run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    run = (i > 0 && s[i] == s[i - 1]) ? run + 1 : 1;
    if (run <= max_run) out.push_back(s[i]);
  }
  return out;
}

std::u32string squash_whitespace(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  bool pending = false;
  for (char32_t c : s) {
    if (unicode::is_whitespace(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::u32string clean_pass(std::u32string_view input, const CleanConfig& cfg) {
  std::u32string s = drop_bad_characters(input);
  if (cfg.lowercase) s = unicode::to_lower(s);
  if (cfg.strip_urls) s = drop_urls(s);
  if (!cfg.keep_hashtag_body) s = drop_tags(s, U'#');
  if (!cfg.keep_mention_body) s = drop_tags(s, U'@');
  if (cfg.strip_punctuation) s = drop_punctuation(s, cfg);
  s = isolate_pictographs(s);
  if (cfg.collapse_repeats) s = collapse_runs(s, *cfg.collapse_repeats);
  return squash_whitespace(s);
}

std::vector<std::string> extract_tags(std::string_view text, char32_t sigil) {
  const auto s = unicode::decode_lossy(text);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != sigil || !opens_tag(s, i)) continue;
    std::size_t j = i + 1;
    while (j < s.size() && is_word(s[j])) ++j;
    out.push_back(unicode::encode(unicode::to_lower(std::u32string_view(s).substr(i, j - i))));
    i = j - 1;
  }
  return out;
}

}  // namespace

const std::unordered_set<std::string>& stopwords(Lang lang) {
  static const std::unordered_set<std::string> en{
      "a", "an", "the", "and", "or", "but", "if", "of", "at", "by", "for", "with", "about",
      "to", "from", "in", "on", "is", "am", "are", "was", "were", "be", "been", "being",
      "have", "has", "had", "do", "does", "did", "i", "me", "my", "we", "our", "you", "your",
      "he", "him", "his", "she", "her", "it", "its", "they", "them", "their", "this", "that",
      "these", "those", "so", "than", "too", "very", "just", "can", "will", "as", "there",
      "here", "what", "which", "who", "whom", "then", "into", "over", "up", "down", "out"};
  static const std::unordered_set<std::string> es{
      "de", "la", "que", "el", "en", "y", "a", "los", "se", "del", "las", "un", "por", "con",
      "una", "su", "para", "es", "al", "lo", "como", "más", "o", "pero", "sus", "le", "ha",
      "me", "si", "sin", "sobre", "este", "ya", "entre", "cuando", "todo", "esta", "ser",
      "son", "dos", "también", "fue", "había", "era", "muy", "hasta", "desde", "mi", "yo",
      "tu", "te", "ti", "nos", "mis", "tus", "ese", "esa", "eso", "estos", "estas", "les",
      "soy", "estoy", "está", "están", "hoy"};
  return lang == Lang::EN ? en : es;
}

void CleanConfig::validate() const {
  if (collapse_repeats && *collapse_repeats < 2)
    throw Error(Errc::InvalidArgument,
                fmt::format("collapse_repeats must be >= 2, got {}", *collapse_repeats));
}

std::string clean(std::string_view text, const CleanConfig& cfg) {
  cfg.validate();
  // Each pass is monotone (it only deletes or normalizes), so iterating to the
  // fixed point makes the composition idempotent even where one stage can
  // expose input for an earlier one (e.g. run truncation forming a URL scheme).
  std::u32string current = clean_pass(unicode::decode_lossy(text), cfg);
  for (;;) {
    std::u32string next = clean_pass(current, cfg);
    if (next == current) break;
    current = std::move(next);
  }
  return unicode::encode(current);
}

std::vector<std::string> tokenize(std::string_view text) {
  const auto s = unicode::decode_lossy(text);
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : s) {
    if (unicode::is_whitespace(c)) {
      if (!current.empty()) out.push_back(unicode::encode(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(unicode::encode(current));
  return out;
}

std::string stem(std::string_view token, Lang lang) {
  auto word = unicode::decode_lossy(token);
  switch (lang) {
    case Lang::EN: return unicode::encode(detail::stem_english(std::move(word)));
    case Lang::ES: return unicode::encode(detail::stem_spanish(std::move(word)));
  }
  throw Error(Errc::UnsupportedLanguage, "no stemmer for this language");
}

bool is_stopword(std::string_view token, Lang lang) {
  return stopwords(lang).contains(std::string(token));
}

std::vector<std::string> extract_hashtags(std::string_view text) { return extract_tags(text, U'#'); }
std::vector<std::string> extract_mentions(std::string_view text) { return extract_tags(text, U'@'); }

namespace {

// Strip leading tag sigils so "#buildthewall" contributes "buildthewall".
std::string_view tag_body(std::string_view token) {
  while (!token.empty() && (token.front() == '#' || token.front() == '@')) token.remove_prefix(1);
  return token;
}

std::string raw_for_tags(std::string_view text, const CleanConfig& cfg) {
  if (!cfg.strip_urls) return std::string(text);
  return unicode::encode(drop_urls(unicode::decode_lossy(text)));
}

}  // namespace

std::vector<std::string> surface_tokens(std::string_view text, const CleanConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(clean(text, cfg))) {
    const auto body = tag_body(tok);
    if (!body.empty()) out.emplace_back(body);
  }
  return out;
}

TokenSequence preprocess(const Tweet& tweet, const CleanConfig& cfg) {
  TokenSequence seq;
  seq.source_id = tweet.id;
  const auto raw = raw_for_tags(tweet.text, cfg);
  seq.kept_hashtags = extract_hashtags(raw);
  seq.kept_mentions = extract_mentions(raw);

  for (const auto& body : surface_tokens(tweet.text, cfg)) {
    if (cfg.remove_stopwords && is_stopword(body, tweet.lang)) continue;
    seq.tokens.push_back(stem(body, tweet.lang));
  }
  return seq;
}

}  // namespace hwk
