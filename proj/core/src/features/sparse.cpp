// SPDX-License-Identifier: Apache-2.0
#include "hwk/features/sparse.hpp"

#include <algorithm>

namespace hwk {

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (const auto& e : entries) s += e.value * dense[e.index];
  return s;
}

double FeatureVector::dot(std::span<const double> weights) const {
  double s = sparse.dot(weights);
  for (std::size_t j = 0; j < dense.size(); ++j) s += dense[j] * weights[sparse_dim + j];
  return s;
}

void FeatureVector::axpy_into(double scale, std::span<double> weights) const {
  for (const auto& e : sparse.entries) weights[e.index] += scale * e.value;
  for (std::size_t j = 0; j < dense.size(); ++j) weights[sparse_dim + j] += scale * dense[j];
}

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for_each([&](std::size_t, double v) { s += v * v; });
  return s;
}

FeatureVector project(const FeatureVector& x, std::span<const std::size_t> columns) {
  FeatureVector out;
  out.sparse_dim = columns.size();
  x.for_each([&](std::size_t col, double v) {
    if (v == 0.0) return;
    const auto it = std::lower_bound(columns.begin(), columns.end(), col);
    if (it != columns.end() && *it == col)
      out.sparse.entries.push_back({static_cast<std::uint32_t>(it - columns.begin()), v});
  });
  return out;
}

}  // namespace hwk
