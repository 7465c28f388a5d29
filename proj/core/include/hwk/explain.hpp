// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hwk/corpus.hpp"
#include "hwk/features/pipeline.hpp"
#include "hwk/features/tfidf.hpp"
#include "hwk/linear.hpp"

namespace hwk {

/// Class probabilities for one text.
using PredictFn = std::function<std::vector<double>(const std::string&)>;

struct Perturbation {
  /// 1 = token kept.
  std::vector<std::uint8_t> mask;
  std::string text;
};

/// Kept tokens joined by single spaces.
std::string apply_mask(const std::vector<std::string>& tokens, const std::vector<std::uint8_t>& mask);

/// Sample 0 keeps every token; the rest keep each position independently
/// with probability 1/2. Throws EmptyTokens.
std::vector<Perturbation> perturb(const std::vector<std::string>& tokens, std::size_t n_samples,
                                  std::uint64_t seed);

struct TokenWeight {
  std::string token;
  std::size_t position = 0;
  double weight = 0;
};

struct Explanation {
  std::string tweet_id;
  std::size_t explained_class = 0;
  /// Probability of the explained class on the unperturbed text.
  double probability = 0;
  /// Top tokens by |weight|, at most top_k and only nonzero weights.
  std::vector<TokenWeight> weights;
  /// Weighted R^2 of the local surrogate.
  double score = 0;
  double intercept = 0;
  /// Surrogate coefficient for every token position.
  std::vector<double> coefficients;
  bool degenerate = false;

  /// JSON text report.
  std::string report() const;
};

struct LimeOptions {
  std::size_t n_samples = 1000;
  std::size_t top_k = 10;
  /// Defaults to 0.75 * sqrt(token count).
  std::optional<double> kernel_width;
  double ridge = 1e-3;
  std::uint64_t seed = 0;
  /// Defaults to the argmax class on the unperturbed text.
  std::optional<std::size_t> label;
};

/// exp(-d^2 / width^2) with d = 1 - sqrt(kept / total), the cosine distance
/// between a mask and the all-ones mask (d = 1 when nothing is kept).
double lime_proximity(std::size_t kept, std::size_t total, double width);

/// Local surrogate over token presence: weighted ridge regression of the
/// explained-class probability on perturbation masks, with proximity weights
/// exp(-d^2 / width^2) and d the cosine distance to the all-ones mask.
Explanation lime_explain(const PredictFn& predict, const std::vector<std::string>& tokens,
                         const LimeOptions& opts = {});
/// Explains a tweet over its whitespace-separated tokens.
Explanation lime_explain(const PredictFn& predict, const Tweet& tweet, const LimeOptions& opts = {});

std::vector<std::string> whitespace_tokens(std::string_view text);

enum class WeightSign { Positive, Negative, Absolute };

struct NgramWeight {
  std::string ngram;
  double weight = 0;
};

/// Nonzero weights of the positive class, sorted by descending weight
/// (Positive), ascending (Negative) or descending magnitude (Absolute).
/// Columns past the vocabulary (dense features) are skipped.
std::vector<NgramWeight> linear_importance(const LinearModel& model, const Vocabulary& vocab, std::size_t top_k,
                                           WeightSign sign = WeightSign::Positive);
/// Same over every pipeline column, dense ones named "[slot]".
std::vector<NgramWeight> linear_importance(const LinearModel& model, const FeaturePipeline& pipeline,
                                           std::size_t top_k, WeightSign sign = WeightSign::Positive);

/// `ngram,weight` with six decimals.
std::string importance_csv(const std::vector<NgramWeight>& rows);

}  // namespace hwk
