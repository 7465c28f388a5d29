// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <cmath>

#include "hwk/autodiff.hpp"
#include "hwk/error.hpp"

namespace hwk::ad {

void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state, const AdamConfig& cfg) {
  if (grad.size() != param.size())
    throw Error(Errc::ShapeMismatch, fmt::format("adam: {} parameters vs {} gradients", param.size(), grad.size()));
  if (state.m.empty()) {
    state.m.assign(param.size(), 0.0);
    state.v.assign(param.size(), 0.0);
  }
  if (state.m.size() != param.size()) throw Error(Errc::ShapeMismatch, "adam: state does not match parameters");
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    param[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

Adam::Adam(std::vector<Tensor> params, AdamConfig cfg)
    : params_(std::move(params)), states_(params_.size()), cfg_(cfg) {}

void Adam::step() {
  std::vector<double> zeros;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    if (p.has_grad()) {
      adam_step(p.data(), p.grad(), states_[i], cfg_);
    } else {
      zeros.assign(p.size(), 0.0);
      adam_step(p.data(), zeros, states_[i], cfg_);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace hwk::ad
