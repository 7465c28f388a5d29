// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hwk/corpus.hpp"

namespace hwk {

struct HashtagRow {
  std::string tag;
  std::size_t count = 0;
  /// count / all hashtag occurrences in the dataset.
  double share = 0;
};

struct HashtagTable {
  /// Most frequent first, ties alphabetical; at most top_k rows.
  std::vector<HashtagRow> rows;
  std::size_t total_occurrences = 0;
  std::size_t distinct = 0;
  /// Tweets carrying at least one / more than one hashtag.
  std::size_t tweets_with_tag = 0;
  std::size_t tweets_with_multiple = 0;
  std::size_t tweets = 0;

  /// Combined share of the listed rows.
  double top_share() const;
  std::string csv() const;
};

/// Case-folded hashtag occurrence counts.
HashtagTable hashtag_stats(const Dataset& ds, std::size_t top_k);

/// P(tweet has >= min_tags hashtags | a) / P(... | b). Throws NoMatches when b
/// has no such tweet, EmptyCorpus when either side is empty.
double hashtag_likelihood_ratio(const Dataset& a, const Dataset& b, std::size_t min_tags = 1);

struct LabelRate {
  std::size_t matches = 0;
  std::size_t positives = 0;
  double rate = 0;
};

/// Share of tweets matching `pattern` that carry label `dim`. A pattern
/// starting with '#' matches hashtags, anything else matches surface tokens
/// (hashtag bodies included); matching is case-insensitive and each tweet
/// counts once. Throws NoMatches, Unlabeled.
LabelRate conditional_label_rate(const Dataset& ds, std::string_view pattern, Dim dim = Dim::HS);

struct DiscrepancyRow {
  std::string pattern;
  LabelRate train;
  LabelRate test;
  double delta = 0;
};

struct DiscrepancyReport {
  /// Sorted by delta descending, ties by pattern.
  std::vector<DiscrepancyRow> rows;
  std::size_t min_support = 0;
  Dim dim = Dim::HS;
  /// hashtag_likelihood_ratio(train, test), 0 when the test split has no tags.
  double tag_likelihood_ratio = 0;

  std::string csv() const;
  std::string summary(std::size_t top = 10) const;
};

/// Label-rate drift between splits over every hashtag and unigram that
/// matches at least `min_support` tweets in both.
DiscrepancyReport discrepancy_report(const Dataset& train, const Dataset& test, std::size_t min_support = 20,
                                     Dim dim = Dim::HS);

}  // namespace hwk
