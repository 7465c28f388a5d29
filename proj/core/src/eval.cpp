// SPDX-License-Identifier: Apache-2.0
#include "hwk/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

#include "hwk/error.hpp"

namespace hwk {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw Error(Errc::LengthMismatch, fmt::format("{} gold labels vs {} predictions", a, b));
  if (a == 0) throw Error(Errc::EmptyInput, "no label pairs to score");
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

ClassMetrics class_metrics(long tp, long fp, long fn) {
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  m.support = tp + fn;
  return m;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1))
      throw Error(Errc::InvalidArgument, fmt::format("binary labels expected, got ({}, {})", t, p));
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (t && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricReport metrics_from_confusion(const ConfusionMatrix& cm) {
  MetricReport r;
  r.positive = class_metrics(cm.tp, cm.fp, cm.fn);
  r.negative = class_metrics(cm.tn, cm.fn, cm.fp);
  r.macro_f1 = 0.5 * (r.positive.f1 + r.negative.f1);
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  return r;
}

MetricReport binary_metrics(std::span<const int> y_true, std::span<const int> y_pred) {
  return metrics_from_confusion(confusion(y_true, y_pred));
}

double false_positive_rate(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }

MulticlassConfusion confusion_multiclass(std::span<const int> y_true, std::span<const int> y_pred) {
  check_lengths(y_true.size(), y_pred.size());
  std::set<int> labels(y_true.begin(), y_true.end());
  labels.insert(y_pred.begin(), y_pred.end());
  MulticlassConfusion cm;
  cm.labels.assign(labels.begin(), labels.end());
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < cm.labels.size(); ++i) pos[cm.labels[i]] = i;
  cm.counts.assign(cm.labels.size(), std::vector<long>(cm.labels.size(), 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) ++cm.counts[pos[y_true[i]]][pos[y_pred[i]]];
  return cm;
}

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred) {
  auto cm = confusion_multiclass(y_true, y_pred);
  if (std::all_of(cm.labels.begin(), cm.labels.end(), [](int l) { return l == 0 || l == 1; }))
    return binary_metrics(y_true, y_pred).macro_f1;
  const std::size_t k = cm.labels.size();
  double sum = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long tp = cm.counts[c][c], fp = 0, fn = 0;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      fp += cm.counts[o][c];
      fn += cm.counts[c][o];
    }
    sum += class_metrics(tp, fp, fn).f1;
  }
  return sum / static_cast<double>(k);
}

double emr(std::span<const LabelSet> truth, std::span<const LabelSet> pred) {
  check_lengths(truth.size(), pred.size());
  long hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == pred[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<int> dimension(std::span<const LabelSet> labels, Dim dim) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.get(dim) ? 1 : 0);
  return out;
}

double subtask_b_score(std::span<const LabelSet> truth, std::span<const LabelSet> pred) {
  check_lengths(truth.size(), pred.size());
  double sum = 0;
  for (Dim d : kAllDims) sum += binary_metrics(dimension(truth, d), dimension(pred, d)).macro_f1;
  return sum / 3.0;
}

}  // namespace hwk
