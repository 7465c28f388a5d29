// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "hwk/autodiff.hpp"

namespace {

// First char-CNN layer at full width: [70, 140] input, kernel 7.
void BM_Conv1dForward(benchmark::State& state) {
  hwk::Rng rng(3);
  const auto filters = static_cast<std::size_t>(state.range(0));
  const auto x = hwk::ad::Tensor::randn({70, 140}, rng, 1.0);
  const auto w = hwk::ad::Tensor::randn({filters, 70, 7}, rng, 0.05);
  const auto b = hwk::ad::Tensor::zeros({filters});
  for (auto _ : state) {
    hwk::ad::Tape tape;
    benchmark::DoNotOptimize(hwk::ad::conv1d(tape, x, w, b));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(filters * 70 * 7 * 134));
}
BENCHMARK(BM_Conv1dForward)->Arg(16)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Conv1dBackward(benchmark::State& state) {
  hwk::Rng rng(3);
  const auto filters = static_cast<std::size_t>(state.range(0));
  const auto x = hwk::ad::Tensor::randn({70, 140}, rng, 1.0);
  auto w = hwk::ad::Tensor::randn({filters, 70, 7}, rng, 0.05, true);
  auto b = hwk::ad::Tensor::zeros({filters}, true);
  for (auto _ : state) {
    hwk::ad::Tape tape;
    tape.backward(hwk::ad::sum(tape, hwk::ad::conv1d(tape, x, w, b)));
  }
}
BENCHMARK(BM_Conv1dBackward)->Arg(16)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace
