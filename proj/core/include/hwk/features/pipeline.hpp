// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hwk/corpus.hpp"
#include "hwk/features/sentiment.hpp"
#include "hwk/features/sparse.hpp"
#include "hwk/features/surface.hpp"
#include "hwk/features/tfidf.hpp"
#include "hwk/textprep.hpp"

namespace hwk {

/// The engineered per-tweet slots, in vector order.
inline constexpr std::array<std::string_view, 13> kDenseSlots{
    "syllable_count", "avg_syllable",           "word_count",   "character_count",
    "length",         "capitals",               "word_vs_unique", "word_unique_percentage",
    "word_density",   "hashtag_count",          "mention_count",  "fre",
    "fkgl"};

/// Slots that may be dropped by configuration.
inline constexpr std::array<std::string_view, 5> kDroppableSlots{
    "avg_syllable", "capitals", "word_vs_unique", "character_count", "word_unique_percentage"};

inline constexpr std::array<std::string_view, 3> kSentimentSlots{"sentiment_pos", "sentiment_neg",
                                                                 "sentiment_neu"};

struct FeatureConfig {
  CleanConfig clean;
  NgramRange ngrams;
  int min_df = 2;
  bool dense = true;
  bool standardize = true;
  bool sentiment = false;
  std::set<std::string> drop;

  /// Throws InvalidArgument on an out-of-range n-gram range or unknown slot.
  void validate() const;
  std::vector<std::string> dense_names() const;
};

/// Raw (unscaled) engineered slots of one tweet.
std::vector<double> dense_features(const Tweet& tweet, const TokenSequence& tokens,
                                   const FeatureConfig& cfg, const SentimentLexicon* lex);

/// TF-IDF block followed by the standardized engineered block. Every statistic
/// is fitted on the training split and reused for later transforms.
class FeaturePipeline {
 public:
  explicit FeaturePipeline(FeatureConfig cfg = {});

  void fit(const Dataset& train, std::optional<SentimentLexicon> lexicon = std::nullopt);
  FeatureVector transform(const Tweet& tweet) const;
  std::vector<FeatureVector> transform(const Dataset& ds) const;

  bool fitted() const { return fitted_; }
  std::size_t dim() const;
  const FeatureConfig& config() const { return cfg_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<double>& dense_mean() const { return mean_; }
  const std::vector<double>& dense_scale() const { return scale_; }
  /// Column name: the n-gram for sparse columns, the slot name for dense ones.
  std::string column_name(std::size_t column) const;

  std::string serialize() const;
  static FeaturePipeline parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static FeaturePipeline load(const std::filesystem::path& path);

 private:
  FeatureConfig cfg_;
  Vocabulary vocab_;
  std::optional<SentimentLexicon> lexicon_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  Lang lang_ = Lang::EN;
  bool fitted_ = false;
};

}  // namespace hwk
