// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "common.hpp"
#include "hwk/features/tfidf.hpp"
#include "hwk/linear.hpp"

namespace {

struct Problem {
  std::vector<hwk::FeatureVector> X;
  std::vector<int> y;
};

Problem problem(std::size_t n) {
  hwk::Rng rng(2);
  std::vector<hwk::TokenSequence> docs(n);
  Problem p;
  for (auto& d : docs) {
    d.tokens = bench::words(rng, 20, 3000);
    const bool pos = rng.bernoulli(0.4);
    if (pos) d.tokens.push_back("marker");
    p.y.push_back(pos ? 1 : 0);
  }
  const auto vocab = hwk::fit_tfidf(docs, {1, 2}, 2);
  for (const auto& d : docs) {
    hwk::FeatureVector x;
    x.sparse = hwk::transform_tfidf(d, vocab);
    x.sparse_dim = vocab.size();
    p.X.push_back(std::move(x));
  }
  return p;
}

void BM_SgdTrain(benchmark::State& state) {
  const auto p = problem(static_cast<std::size_t>(state.range(0)));
  hwk::TrainConfig cfg;
  cfg.loss = state.range(1) == 0 ? hwk::Loss::Logistic : hwk::Loss::Hinge;
  cfg.C = 100;
  for (auto _ : state) benchmark::DoNotOptimize(hwk::train(p.X, p.y, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.epochs);
}
BENCHMARK(BM_SgdTrain)->Args({2000, 0})->Args({2000, 1})->Args({10000, 0})->Unit(benchmark::kMillisecond);

}  // namespace
