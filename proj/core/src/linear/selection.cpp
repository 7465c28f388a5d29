// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "hwk/error.hpp"
#include "hwk/eval.hpp"
#include "hwk/linear.hpp"
#include "hwk/random.hpp"

namespace hwk {

OvrModel one_vs_rest_train(std::span<const FeatureVector> X, std::span<const int> y, const TrainConfig& cfg) {
  OvrModel out;
  out.classes.assign(y.begin(), y.end());
  std::sort(out.classes.begin(), out.classes.end());
  out.classes.erase(std::unique(out.classes.begin(), out.classes.end()), out.classes.end());
  if (out.classes.size() < 2) throw Error(Errc::SingleClass, "one-vs-rest needs at least two classes");
  if (out.classes.size() == 2) {
    out.models.push_back(train(X, y, cfg));
    return out;
  }
  std::vector<int> binary(y.size());
  for (int c : out.classes) {
    for (std::size_t i = 0; i < y.size(); ++i) binary[i] = y[i] == c ? 1 : 0;
    out.models.push_back(train(X, binary, cfg));
  }
  return out;
}

std::vector<int> one_vs_rest_predict(const OvrModel& model, std::span<const FeatureVector> X) {
  std::vector<int> out;
  out.reserve(X.size());
  for (const auto& x : X) out.push_back(model.predict(x));
  return out;
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed) {
  if (k < 2) throw Error(Errc::InvalidArgument, fmt::format("k must be >= 2, got {}", k));
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t dealt = 0;
  for (auto& [label, members] : by_class) {
    if (members.size() < static_cast<std::size_t>(k))
      throw Error(Errc::ClassTooSmall,
                  fmt::format("class {} has {} members, fewer than k = {}", label, members.size(), k));
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t i : members) folds[dealt++ % folds.size()].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<GridPoint> default_grid() {
  std::vector<GridPoint> grid;
  for (Loss loss : {Loss::Logistic, Loss::Hinge})
    for (Penalty penalty : {Penalty::L1, Penalty::L2})
      for (double C : {0.01, 0.1, 1.0, 10.0}) grid.push_back({loss, penalty, C});
  return grid;
}

GridSearchResult grid_search_cv(std::span<const FeatureVector> X, std::span<const int> y,
                                const std::vector<GridPoint>& grid, const GridSearchOptions& opts) {
  if (grid.empty()) throw Error(Errc::InvalidArgument, "empty parameter grid");
  if (X.size() != y.size()) throw Error(Errc::DimensionMismatch, "feature and label counts differ");
  const auto folds = stratified_kfold(y, opts.k, opts.seed);

  // Training-set masks per fold, shared by every grid point.
  std::vector<std::vector<FeatureVector>> train_x(folds.size());
  std::vector<std::vector<int>> train_y(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<char> held(X.size(), 0);
    for (auto i : folds[f]) held[i] = 1;
    for (std::size_t i = 0; i < X.size(); ++i)
      if (!held[i]) {
        train_x[f].push_back(X[i]);
        train_y[f].push_back(y[i]);
      }
  }

  GridSearchResult out;
  out.results.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out.results[g].params = grid[g];
    out.results[g].fold_macro_f1.assign(folds.size(), 0.0);
  }

  const std::size_t tasks = grid.size() * folds.size();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t task; (task = next.fetch_add(1)) < tasks;) {
      const std::size_t g = task / folds.size(), f = task % folds.size();
      try {
        TrainConfig cfg;
        cfg.loss = grid[g].loss;
        cfg.penalty = grid[g].penalty;
        cfg.C = grid[g].C;
        cfg.seed = opts.seed;
        cfg.epochs = opts.epochs;
        const auto model = one_vs_rest_train(train_x[f], train_y[f], cfg);
        std::vector<int> truth, pred;
        for (auto i : folds[f]) {
          truth.push_back(y[i]);
          pred.push_back(model.predict(X[i]));
        }
        out.results[g].fold_macro_f1[f] = macro_f1(truth, pred);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& r : out.results) {
    const double n = static_cast<double>(r.fold_macro_f1.size());
    double m = 0;
    for (double v : r.fold_macro_f1) m += v;
    m /= n;
    double var = 0;
    for (double v : r.fold_macro_f1) var += (v - m) * (v - m);
    r.mean = m;
    r.std = std::sqrt(var / n);
  }
  for (std::size_t g = 1; g < out.results.size(); ++g)
    if (out.results[g].mean > out.results[out.best].mean) out.best = g;
  out.best_params = out.results[out.best].params;
  return out;
}

}  // namespace hwk
