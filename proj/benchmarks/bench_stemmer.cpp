// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "hwk/textprep.hpp"

namespace {

const std::vector<std::string> kEnglish{"generously", "hopefulness", "relational", "immigrants", "invading",
                                        "communities", "deportation", "happily", "connected", "nationalism"};
const std::vector<std::string> kSpanish{"inmigrantes", "invasiones", "comunidades", "felizmente", "deportación",
                                        "cantaríamos", "nacionalismo", "conectados", "frontera", "mujeres"};

void BM_Stem(benchmark::State& state) {
  const bool es = state.range(0) == 1;
  const auto& words = es ? kSpanish : kEnglish;
  const auto lang = es ? hwk::Lang::ES : hwk::Lang::EN;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hwk::stem(words[i++ % words.size()], lang));
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(es ? "es" : "en");
}
BENCHMARK(BM_Stem)->Arg(0)->Arg(1);

}  // namespace
