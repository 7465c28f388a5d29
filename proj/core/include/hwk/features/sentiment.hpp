// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "hwk/corpus.hpp"
#include "hwk/textprep.hpp"

namespace hwk {

/// token -> valence in [-4, 4]. Stopwords of `lang` carry no sentiment mass.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  explicit SentimentLexicon(Lang lang) : lang_(lang) {}

  Lang lang() const { return lang_; }
  std::size_t size() const { return valence_.size(); }
  void add(std::string token, double valence);
  std::optional<double> valence(std::string_view token) const;
  bool ignores(std::string_view token) const;

  /// Copy keyed by stems; keys colliding after stemming average their valence.
  SentimentLexicon stemmed() const;

  /// `token<TAB>valence` lines; '#' lines and blank lines are skipped.
  static SentimentLexicon parse(std::string_view text, Lang lang,
                                std::string_view source = "<memory>");
  static SentimentLexicon load(const std::filesystem::path& path, Lang lang);

  const std::unordered_map<std::string, double>& entries() const { return valence_; }
  bool is_stemmed() const { return stemmed_; }
  static SentimentLexicon from_entries(Lang lang, std::unordered_map<std::string, double> entries,
                                       bool stemmed);

 private:
  Lang lang_ = Lang::EN;
  std::unordered_map<std::string, double> valence_;
  bool stemmed_ = false;
};

/// The lexicon shipped with the library (installed under share/hwk).
SentimentLexicon default_lexicon(Lang lang);

struct SentimentScores {
  double pos = 0;
  double neg = 0;
  double neu = 1;
};

/// Shares of positive valence mass, absolute negative mass and the count of
/// out-of-lexicon tokens. Sums to 1; (0, 0, 1) when nothing carries mass.
SentimentScores sentiment_scores(const TokenSequence& tokens, const SentimentLexicon& lex);

}  // namespace hwk
