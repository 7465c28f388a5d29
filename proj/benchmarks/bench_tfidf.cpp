// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "common.hpp"
#include "hwk/features/tfidf.hpp"

namespace {

std::vector<hwk::TokenSequence> corpus(std::size_t docs) {
  hwk::Rng rng(1);
  std::vector<hwk::TokenSequence> out(docs);
  for (auto& d : out) d.tokens = bench::words(rng, 20, 5000);
  return out;
}

void BM_TfidfFit(benchmark::State& state) {
  const auto docs = corpus(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hwk::fit_tfidf(docs, {1, 3}, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TfidfFit)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_TfidfTransform(benchmark::State& state) {
  const auto docs = corpus(10000);
  const auto vocab = hwk::fit_tfidf(docs, {1, 3}, 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hwk::transform_tfidf(docs[i++ % docs.size()], vocab));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TfidfTransform);

}  // namespace
