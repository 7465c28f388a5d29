// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hwk {

struct SparseEntry {
  std::uint32_t index;
  double value;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Entries sorted by strictly increasing index; values finite and non-zero.
struct SparseVector {
  std::vector<SparseEntry> entries;

  std::size_t nnz() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  double dot(std::span<const double> dense) const;
  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

/// A sparse block over columns [0, sparse_dim) followed by a dense block
/// occupying [sparse_dim, sparse_dim + dense.size()).
struct FeatureVector {
  SparseVector sparse;
  std::vector<double> dense;
  std::size_t sparse_dim = 0;

  std::size_t dim() const { return sparse_dim + dense.size(); }
  double dot(std::span<const double> weights) const;
  /// weights[i] += scale * x[i] for every stored coordinate.
  void axpy_into(double scale, std::span<double> weights) const;
  double squared_norm() const;

  template <typename F>
  void for_each(F&& f) const {
    for (const auto& e : sparse.entries) f(static_cast<std::size_t>(e.index), e.value);
    for (std::size_t j = 0; j < dense.size(); ++j) f(sparse_dim + j, dense[j]);
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Keeps only the listed columns (sorted ascending), renumbered 0..k-1, as a
/// purely sparse vector.
FeatureVector project(const FeatureVector& x, std::span<const std::size_t> columns);

}  // namespace hwk
