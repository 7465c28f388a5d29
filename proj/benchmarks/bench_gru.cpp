// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "hwk/neural.hpp"

namespace {

hwk::BiGru model(std::size_t embed, std::size_t hidden) {
  hwk::GruHyper h;
  h.vocab_size = 5000;
  h.embed_dim = embed;
  h.hidden = hidden;
  return hwk::BiGru(h, hwk::WordIndex{}, {}, 1);
}

hwk::NeuralInput input(std::size_t len) {
  hwk::NeuralInput in;
  for (std::size_t i = 0; i < len; ++i) in.ids.push_back(2 + (i * 37) % 4000);
  in.ids.resize(140, 0);
  return in;
}

void BM_BiGruForward(benchmark::State& state) {
  const auto m = model(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto in = input(30);
  hwk::Rng rng(2);
  for (auto _ : state) {
    hwk::ad::Tape tape;
    benchmark::DoNotOptimize(m.forward(tape, in, rng, false));
  }
}
BENCHMARK(BM_BiGruForward)->Args({16, 8})->Args({400, 100})->Unit(benchmark::kMicrosecond);

void BM_BiGruTrainStep(benchmark::State& state) {
  auto m = model(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  const auto in = input(30);
  const hwk::ad::Tensor target(hwk::ad::Shape{2}, {0.0, 1.0});
  hwk::Rng rng(2);
  for (auto _ : state) {
    hwk::ad::Tape tape;
    tape.backward(hwk::ad::cross_entropy(tape, m.forward(tape, in, rng, true), target));
  }
}
BENCHMARK(BM_BiGruTrainStep)->Args({16, 8})->Args({400, 100})->Unit(benchmark::kMicrosecond);

}  // namespace
