// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/eval.hpp"
#include "hwk/neural.hpp"

namespace hwk {

namespace {

void check_labels(const std::vector<NeuralInput>& x, const std::vector<int>& y, std::size_t classes,
                  const char* what) {
  if (x.size() != y.size())
    throw Error(Errc::LengthMismatch, fmt::format("{}: {} inputs but {} labels", what, x.size(), y.size()));
  if (x.empty()) throw Error(Errc::EmptyInput, fmt::format("{} set is empty", what));
  for (int label : y)
    if (label < 0 || std::size_t(label) >= classes)
      throw Error(Errc::BadLabelValue, fmt::format("{}: label {} outside [0, {})", what, label, classes));
}

double evaluate_macro_f1(const NeuralClassifier& model, const std::vector<NeuralInput>& x,
                         const std::vector<int>& y) {
  std::vector<int> pred;
  pred.reserve(x.size());
  for (const auto& in : x) pred.push_back(model.predict(in));
  return macro_f1(y, pred);
}

}  // namespace

std::string TrainHistory::csv() const {
  std::string out = "epoch,train_loss,val_macro_f1\n";
  for (const auto& e : epochs) out += fmt::format("{},{:.6f},{:.6f}\n", e.epoch, e.train_loss, e.val_macro_f1);
  return out;
}

TrainHistory train_classifier(NeuralClassifier& model, const std::vector<NeuralInput>& train_x,
                              const std::vector<int>& train_y, const std::vector<NeuralInput>& val_x,
                              const std::vector<int>& val_y, const NeuralTrainOptions& opts) {
  check_labels(train_x, train_y, model.classes(), "train");
  check_labels(val_x, val_y, model.classes(), "validation");
  if (opts.epochs <= 0) throw Error(Errc::InvalidArgument, "epochs must be positive");

  ad::Adam adam(model.params().tensors(), opts.adam);
  Rng rng(opts.seed);
  std::vector<std::size_t> order(train_x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = model.batch();

  TrainHistory history;
  history.best_val_macro_f1 = -1;
  auto best = model.params().snapshot();
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    Rng noise = rng.fork(std::uint64_t(epoch));
    double loss_sum = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / double(end - start);
      adam.zero_grad();
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        ad::Tape tape;
        const ad::Tensor probs = model.forward(tape, train_x[i], noise, true);
        ad::Tensor target = ad::Tensor::zeros({model.classes()});
        target.data()[std::size_t(train_y[i])] = 1.0;
        const ad::Tensor loss = ad::cross_entropy(tape, probs, target);
        loss_sum += loss.item();
        tape.backward(ad::affine(tape, loss, scale, 0.0));
      }
      adam.step();
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / double(train_x.size());
    rec.val_macro_f1 = evaluate_macro_f1(model, val_x, val_y);
    if (!std::isfinite(rec.train_loss))
      throw Error(Errc::InvalidArgument, fmt::format("non-finite training loss at epoch {}", epoch));
    history.epochs.push_back(rec);
    if (rec.val_macro_f1 > history.best_val_macro_f1) {
      history.best_val_macro_f1 = rec.val_macro_f1;
      history.best_epoch = epoch;
      best = model.params().snapshot();
    }
    if (rec.val_macro_f1 >= opts.target_val_macro_f1) break;
  }
  model.params().restore(best);
  return history;
}

std::vector<NeuralInput> encode_all(const NeuralClassifier& model, const Dataset& ds) {
  std::vector<NeuralInput> out;
  out.reserve(ds.tweets.size());
  for (const auto& t : ds.tweets) out.push_back(model.encode(t));
  return out;
}

RepeatSummary repeat_seeds(const std::function<double(std::uint64_t)>& experiment,
                           const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error(Errc::EmptyInput, "no seeds to repeat over");
  RepeatSummary s;
  for (auto seed : seeds) s.values.push_back(experiment(seed));
  const double n = double(s.values.size());
  s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  double ss = 0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.std = s.values.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return s;
}

}  // namespace hwk
