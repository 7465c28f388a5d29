// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hwk/autodiff.hpp"

namespace hwk::ad {

struct Tensor::Impl {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;
  bool requires_grad = false;
};

/// Gradient buffer of `t`, allocated as zeros on first use.
inline std::vector<double>& grad_of(Tensor::Impl& t) {
  if (t.grad.size() != t.data.size()) t.grad.assign(t.data.size(), 0.0);
  return t.grad;
}

}  // namespace hwk::ad
