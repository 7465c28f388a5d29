// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hwk/features/sparse.hpp"

namespace hwk {

enum class Loss { Logistic, Hinge };
enum class Penalty { L1, L2 };

Loss parse_loss(std::string_view name);
Penalty parse_penalty(std::string_view name);
std::string_view to_string(Loss loss);
std::string_view to_string(Penalty penalty);

struct TrainConfig {
  Loss loss = Loss::Logistic;
  Penalty penalty = Penalty::L2;
  /// Inverse regularization strength: the objective is
  /// mean(loss) + (1 / C) * penalty, with penalty = |w|_1 or |w|^2 / 2.
  double C = 0.1;
  std::uint64_t seed = 0;
  int epochs = 30;
  /// Initial step size; 0 picks one from the data scale.
  double eta0 = 0.0;

  void validate() const;
};

struct TrainTrace {
  /// Objective at each accepted epoch checkpoint. L2 runs report the
  /// averaged iterate, L1 runs the proximal iterate.
  std::vector<double> objective;
  int rejected_epochs = 0;
};

/// Binary linear classifier over classes {classes[0], classes[1]};
/// a positive margin selects classes[1].
struct LinearModel {
  Loss loss = Loss::Logistic;
  Penalty penalty = Penalty::L2;
  double C = 0.1;
  std::vector<int> classes{0, 1};
  std::vector<double> weights;
  double bias = 0.0;
  /// Hinge models map margins to probabilities as sigmoid(calibration * m).
  double calibration = 1.0;
  /// Checksum of the vocabulary the model was fitted against (0 = unchecked).
  std::uint64_t vocab_checksum = 0;

  std::size_t dim() const { return weights.size(); }
  double margin(const FeatureVector& x) const;
  /// Probability of classes[1].
  double positive_probability(const FeatureVector& x) const;
  /// Probabilities in class order; they sum to 1.
  std::vector<double> predict_proba(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const;
  std::size_t nonzero_count() const;

  /// Throws VocabularyMismatch when both checksums are known and differ.
  void check_vocabulary(std::uint64_t checksum) const;

  std::string serialize() const;
  static LinearModel parse(std::string_view text);
};

/// Regularized objective of `model` on (X, y) with labels mapped to +-1.
double objective(const LinearModel& model, std::span<const FeatureVector> X, std::span<const int> y);

/// Seeded stochastic (sub)gradient descent. L2 uses iterate averaging; L1
/// uses lazily applied proximal soft-thresholding, which leaves exact zeros.
/// An epoch that raises the objective is rolled back and the step halved.
/// Identical (x, y) rows are merged into weighted rows first.
LinearModel train(std::span<const FeatureVector> X, std::span<const int> y, const TrainConfig& cfg,
                  TrainTrace* trace = nullptr);

/// Fits sigmoid(a * margin) to held-out margins by maximum likelihood, a > 0.
double fit_calibration(const LinearModel& model, std::span<const FeatureVector> X, std::span<const int> y);

/// Columns with non-zero weight under an L1 logistic fit; throws AllZero.
std::vector<std::size_t> l1_reduce(std::span<const FeatureVector> X, std::span<const int> y, double C,
                                   std::uint64_t seed, int epochs = 30);

/// One binary model per class (a single model when there are two classes).
struct OvrModel {
  std::vector<int> classes;
  std::vector<LinearModel> models;

  /// Normalized per-class scores; ties resolve to the lowest class index.
  std::vector<double> predict_proba(const FeatureVector& x) const;
  int predict(const FeatureVector& x) const;

  std::string serialize() const;
  static OvrModel parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static OvrModel load(const std::filesystem::path& path);
};

OvrModel one_vs_rest_train(std::span<const FeatureVector> X, std::span<const int> y,
                           const TrainConfig& cfg);
std::vector<int> one_vs_rest_predict(const OvrModel& model, std::span<const FeatureVector> X);

/// Test-index sets of a stratified k-fold partition. Each class is shuffled
/// and the classes, taken in ascending label order, are dealt round-robin.
/// Throws ClassTooSmall if some class has fewer than k members.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed);

struct GridPoint {
  Loss loss = Loss::Logistic;
  Penalty penalty = Penalty::L2;
  double C = 0.1;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

std::vector<GridPoint> default_grid();

struct CVResult {
  GridPoint params;
  std::vector<double> fold_macro_f1;
  double mean = 0;
  double std = 0;
};

struct GridSearchResult {
  std::size_t best = 0;
  GridPoint best_params;
  std::vector<CVResult> results;
};

struct GridSearchOptions {
  int k = 10;
  std::uint64_t seed = 0;
  int epochs = 30;
  /// Worker threads for grid points x folds; 0 or 1 runs serially. Results
  /// do not depend on the thread count.
  int threads = 1;
};

/// Selection by mean macro-F1; ties keep the earliest grid point.
GridSearchResult grid_search_cv(std::span<const FeatureVector> X, std::span<const int> y,
                                const std::vector<GridPoint>& grid, const GridSearchOptions& opts);

}  // namespace hwk
