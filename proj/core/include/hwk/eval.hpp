// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "hwk/corpus.hpp"

namespace hwk {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  long tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  long support = 0;
};

/// Per-class metrics for the negative (index 0) and positive (index 1) class.
/// Ratios with a zero denominator are 0.
struct MetricReport {
  ClassMetrics negative;
  ClassMetrics positive;
  double macro_f1 = 0;
  double accuracy = 0;
};

/// Labels must be 0 or 1. Throws LengthMismatch / EmptyInput.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);
MetricReport metrics_from_confusion(const ConfusionMatrix& cm);
MetricReport binary_metrics(std::span<const int> y_true, std::span<const int> y_pred);
double false_positive_rate(const ConfusionMatrix& cm);

/// k x k counts, rows = truth, columns = prediction, over the sorted union
/// of observed labels.
struct MulticlassConfusion {
  std::vector<int> labels;
  std::vector<std::vector<long>> counts;
};
MulticlassConfusion confusion_multiclass(std::span<const int> y_true, std::span<const int> y_pred);

/// Unweighted mean of per-class F1. Binary inputs always average both
/// classes 0 and 1; otherwise the union of observed labels is used.
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred);

/// Share of tweets whose HS, TR and AG labels all match.
double emr(std::span<const LabelSet> truth, std::span<const LabelSet> pred);

/// Mean over HS, TR and AG of the per-dimension macro-F1.
double subtask_b_score(std::span<const LabelSet> truth, std::span<const LabelSet> pred);

/// Per-dimension label vector of a LabelSet list.
std::vector<int> dimension(std::span<const LabelSet> labels, Dim dim);

}  // namespace hwk
