// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>

#include "hwk/autodiff.hpp"
#include "hwk/error.hpp"
#include "tensor_impl.hpp"

namespace hwk::ad {

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) { return fmt::format("[{}]", fmt::join(shape, ", ")); }

Tensor::Tensor() : impl_(std::make_shared<Impl>()) { impl_->data.assign(1, 0.0); }

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad) : impl_(std::make_shared<Impl>()) {
  if (numel(shape) != data.size())
    throw Error(Errc::ShapeMismatch,
                fmt::format("shape {} needs {} values, got {}", shape_string(shape), numel(shape), data.size()));
  impl_->shape = std::move(shape);
  impl_->data = std::move(data);
  impl_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return filled(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::filled(Shape shape, double value, bool requires_grad) {
  const auto n = numel(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) { return Tensor({}, {value}, requires_grad); }

Tensor Tensor::randn(Shape shape, Rng& rng, double stddev, bool requires_grad) {
  std::vector<double> v(numel(shape));
  for (auto& x : v) x = stddev * rng.normal();
  return Tensor(std::move(shape), std::move(v), requires_grad);
}

const Shape& Tensor::shape() const { return impl_->shape; }
std::size_t Tensor::size() const { return impl_->data.size(); }
std::span<double> Tensor::data() { return impl_->data; }
std::span<const double> Tensor::data() const { return impl_->data; }

double Tensor::item() const {
  if (size() != 1) throw Error(Errc::ShapeMismatch, fmt::format("item() on shape {}", shape_string(shape())));
  return impl_->data[0];
}

bool Tensor::requires_grad() const { return impl_->requires_grad; }
void Tensor::set_requires_grad(bool on) { impl_->requires_grad = on; }
std::span<double> Tensor::grad() { return impl_->grad; }
std::span<const double> Tensor::grad() const { return impl_->grad; }
bool Tensor::has_grad() const { return !impl_->grad.empty(); }
void Tensor::zero_grad() { std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0); }

Tensor Tensor::clone() const {
  return Tensor(impl_->shape, impl_->data, impl_->requires_grad);
}

void Tape::clear() {
  ops_.clear();
  consumed_ = false;
}

void Tape::record(const Tensor& /*out*/, Backward rule) { ops_.push_back(std::move(rule)); }

void Tape::backward(const Tensor& loss) {
  if (consumed_) throw Error(Errc::NoTape, "tape already consumed by a backward pass; clear() and re-run forward");
  if (ops_.empty()) throw Error(Errc::NoTape, "nothing recorded on the tape");
  if (loss.size() != 1)
    throw Error(Errc::ShapeMismatch, fmt::format("backward needs a scalar loss, got {}", shape_string(loss.shape())));
  grad_of(*loss.impl_)[0] += 1.0;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
  ops_.clear();
  consumed_ = true;
}

}  // namespace hwk::ad
