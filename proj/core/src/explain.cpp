// SPDX-License-Identifier: Apache-2.0
#include "hwk/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/random.hpp"

namespace hwk {

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) out += fmt::format("\\u{:04x}", c);
        else out += char(c);
    }
  }
  return out + "\"";
}

std::size_t argmax(const std::vector<double>& p) {
  return std::size_t(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

std::string apply_mask(const std::vector<std::string>& tokens, const std::vector<std::uint8_t>& mask) {
  if (tokens.size() != mask.size())
    throw Error(Errc::LengthMismatch, fmt::format("{} tokens but mask of {}", tokens.size(), mask.size()));
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!mask[i]) continue;
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<Perturbation> perturb(const std::vector<std::string>& tokens, std::size_t n_samples,
                                  std::uint64_t seed) {
  if (tokens.empty()) throw Error(Errc::EmptyTokens, "nothing to perturb: no tokens");
  if (n_samples == 0) throw Error(Errc::InvalidArgument, "n_samples must be positive");
  Rng rng(seed);
  std::vector<Perturbation> out(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto& mask = out[s].mask;
    mask.assign(tokens.size(), 1);
    if (s > 0)
      for (auto& bit : mask) bit = rng.bernoulli(0.5) ? 1 : 0;
    out[s].text = apply_mask(tokens, mask);
  }
  return out;
}

std::vector<std::string> whitespace_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

double lime_proximity(std::size_t kept, std::size_t total, double width) {
  const double d = kept == 0 || total == 0 ? 1.0 : 1.0 - std::sqrt(double(kept) / double(total));
  return std::exp(-d * d / (width * width));
}

Explanation lime_explain(const PredictFn& predict, const std::vector<std::string>& tokens,
                         const LimeOptions& opts) {
  if (opts.ridge < 0) throw Error(Errc::InvalidArgument, "ridge must be non-negative");
  if (opts.kernel_width && !(*opts.kernel_width > 0))
    throw Error(Errc::InvalidArgument, "kernel width must be positive");
  const auto samples = perturb(tokens, opts.n_samples, opts.seed);
  const std::size_t n = samples.size(), p = tokens.size();

  Explanation ex;
  ex.coefficients.assign(p, 0.0);
  const auto original = predict(samples[0].text);
  if (original.empty()) throw Error(Errc::InvalidArgument, "predict_fn returned no probabilities");
  ex.explained_class = opts.label.value_or(argmax(original));
  if (ex.explained_class >= original.size())
    throw Error(Errc::InvalidArgument, fmt::format("label {} outside {} classes", ex.explained_class, original.size()));
  ex.probability = original[ex.explained_class];

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n), w(n);
  const double width = opts.kernel_width.value_or(0.75 * std::sqrt(double(p)));
  for (std::size_t s = 0; s < n; ++s) {
    const auto probs = s == 0 ? original : predict(samples[s].text);
    if (probs.size() != original.size())
      throw Error(Errc::DimensionMismatch, "predict_fn changed its number of classes");
    y(Eigen::Index(s)) = probs[ex.explained_class];
    std::size_t kept = 0;
    for (std::size_t j = 0; j < p; ++j) {
      X(Eigen::Index(s), Eigen::Index(j)) = samples[s].mask[j];
      kept += samples[s].mask[j];
    }
    w(Eigen::Index(s)) = lime_proximity(kept, p, width);
  }

  if (y.maxCoeff() - y.minCoeff() <= 1e-12) {
    ex.degenerate = true;
    ex.intercept = y(0);
    return ex;
  }

  const double wsum = w.sum();
  const Eigen::RowVectorXd x_mean = (w.asDiagonal() * X).colwise().sum() / wsum;
  const double y_mean = w.dot(y) / wsum;
  const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;
  Eigen::MatrixXd A = Xc.transpose() * w.asDiagonal() * Xc;
  A.diagonal().array() += opts.ridge;
  const Eigen::VectorXd beta = A.ldlt().solve(Xc.transpose() * w.asDiagonal() * yc);
  ex.intercept = y_mean - x_mean.dot(beta);

  const Eigen::VectorXd resid = yc - Xc * beta;
  const double ss_res = w.dot(resid.cwiseProduct(resid));
  const double ss_tot = w.dot(yc.cwiseProduct(yc));
  ex.score = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 0.0;

  for (std::size_t j = 0; j < p; ++j) ex.coefficients[j] = beta(Eigen::Index(j));
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(ex.coefficients[a]) > std::abs(ex.coefficients[b]);
  });
  for (std::size_t j : order) {
    if (ex.weights.size() >= opts.top_k) break;
    if (ex.coefficients[j] == 0.0 || !std::isfinite(ex.coefficients[j])) continue;
    ex.weights.push_back({tokens[j], j, ex.coefficients[j]});
  }
  return ex;
}

Explanation lime_explain(const PredictFn& predict, const Tweet& tweet, const LimeOptions& opts) {
  auto ex = lime_explain(predict, whitespace_tokens(tweet.text), opts);
  ex.tweet_id = tweet.id;
  return ex;
}

std::string Explanation::report() const {
  std::string out = "{\n";
  out += fmt::format("  \"id\": {},\n", json_string(tweet_id));
  out += fmt::format("  \"class\": {},\n", explained_class);
  out += fmt::format("  \"probability\": {:.6f},\n", probability);
  out += fmt::format("  \"score\": {:.6f},\n", score);
  out += fmt::format("  \"intercept\": {:.6f},\n", intercept);
  out += fmt::format("  \"degenerate\": {},\n", degenerate ? "true" : "false");
  out += "  \"weights\": [";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out += fmt::format("{}\n    {{\"token\": {}, \"position\": {}, \"weight\": {:.6f}}}", i ? "," : "",
                       json_string(weights[i].token), weights[i].position, weights[i].weight);
  }
  out += weights.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

namespace {

std::vector<NgramWeight> rank(std::vector<NgramWeight> rows, std::size_t top_k, WeightSign sign) {
  std::erase_if(rows, [&](const NgramWeight& r) {
    switch (sign) {
      case WeightSign::Positive: return !(r.weight > 0);
      case WeightSign::Negative: return !(r.weight < 0);
      case WeightSign::Absolute: return r.weight == 0;
    }
    return true;
  });
  std::stable_sort(rows.begin(), rows.end(), [&](const NgramWeight& a, const NgramWeight& b) {
    switch (sign) {
      case WeightSign::Positive: return a.weight > b.weight;
      case WeightSign::Negative: return a.weight < b.weight;
      case WeightSign::Absolute: return std::abs(a.weight) > std::abs(b.weight);
    }
    return false;
  });
  if (rows.size() > top_k) rows.resize(top_k);
  return rows;
}

void require_fitted(const LinearModel& model) {
  if (model.weights.empty()) throw Error(Errc::NotFitted, "linear model has no weights");
}

}  // namespace

std::vector<NgramWeight> linear_importance(const LinearModel& model, const Vocabulary& vocab, std::size_t top_k,
                                           WeightSign sign) {
  require_fitted(model);
  if (vocab.empty()) throw Error(Errc::NotFitted, "vocabulary is empty");
  if (model.weights.size() < vocab.size())
    throw Error(Errc::DimensionMismatch,
                fmt::format("model has {} weights, vocabulary {} terms", model.weights.size(), vocab.size()));
  model.check_vocabulary(vocab.checksum());
  std::vector<NgramWeight> rows;
  for (std::uint32_t i = 0; i < vocab.size(); ++i) rows.push_back({vocab.term(i), model.weights[i]});
  return rank(std::move(rows), top_k, sign);
}

std::vector<NgramWeight> linear_importance(const LinearModel& model, const FeaturePipeline& pipeline,
                                           std::size_t top_k, WeightSign sign) {
  require_fitted(model);
  if (!pipeline.fitted()) throw Error(Errc::NotFitted, "feature pipeline is not fitted");
  if (model.weights.size() != pipeline.dim())
    throw Error(Errc::DimensionMismatch,
                fmt::format("model has {} weights, pipeline {} columns", model.weights.size(), pipeline.dim()));
  model.check_vocabulary(pipeline.vocabulary().checksum());
  std::vector<NgramWeight> rows;
  for (std::size_t i = 0; i < model.weights.size(); ++i) rows.push_back({pipeline.column_name(i), model.weights[i]});
  return rank(std::move(rows), top_k, sign);
}

std::string importance_csv(const std::vector<NgramWeight>& rows) {
  std::string out = "ngram,weight\n";
  for (const auto& r : rows) {
    const bool quote = r.ngram.find_first_of(",\"\n") != std::string::npos;
    std::string cell = r.ngram;
    if (quote) {
      std::string q = "\"";
      for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      cell = q + "\"";
    }
    out += fmt::format("{},{:.6f}\n", cell, r.weight);
  }
  return out;
}

}  // namespace hwk
