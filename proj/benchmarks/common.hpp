// SPDX-License-Identifier: Apache-2.0
#pragma once
#include <string>
#include <vector>

#include "hwk/random.hpp"

namespace bench {

/// Zipf-ish random word soup, `n` tokens drawn from a `vocab`-word lexicon.
inline std::vector<std::string> words(hwk::Rng& rng, std::size_t n, std::size_t vocab) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = rng.below(vocab);
    out.push_back("w" + std::to_string(r * r / vocab));
  }
  return out;
}

}  // namespace bench
