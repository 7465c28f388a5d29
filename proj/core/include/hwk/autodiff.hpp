// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hwk/random.hpp"

namespace hwk::ad {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major float64 array with an optional gradient buffer. Copies
/// share storage; use clone() for a deep copy.
class Tensor {
 public:
  Tensor();
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor filled(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  /// Normal(0, stddev) entries.
  static Tensor randn(Shape shape, Rng& rng, double stddev, bool requires_grad = false);

  const Shape& shape() const;
  std::size_t dim(std::size_t axis) const { return shape().at(axis); }
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const;

  std::span<double> data();
  std::span<const double> data() const;
  double item() const;
  double operator[](std::size_t i) const { return data()[i]; }

  bool requires_grad() const;
  void set_requires_grad(bool on);
  /// Empty span until a backward pass has written to it.
  std::span<double> grad();
  std::span<const double> grad() const;
  bool has_grad() const;
  void zero_grad();

  Tensor clone() const;
  bool same(const Tensor& other) const { return impl_ == other.impl_; }

  struct Impl;
  std::shared_ptr<Impl> impl() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
  friend class Tape;
};

/// Records differentiable ops in execution order. One backward pass consumes
/// the tape; reuse requires clear() and a fresh forward pass.
class Tape {
 public:
  using Backward = std::function<void()>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// With recording off, ops compute values only (inference).
  void set_recording(bool on) { recording_ = on; }
  bool recording() const { return recording_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }
  void clear();

  /// Adds an op whose output is `out`; `rule` reads out's gradient and
  /// accumulates into its inputs.
  void record(const Tensor& out, Backward rule);

  /// Seeds d(loss)/d(loss) = 1 and runs the rules in reverse order.
  /// Throws ShapeMismatch for non-scalar losses, NoTape on an empty or
  /// already consumed tape.
  void backward(const Tensor& loss);

 private:
  std::vector<Backward> ops_;
  bool recording_ = true;
  bool consumed_ = false;
};

// Primitives. Outputs require grad when any input does and the tape records.

/// [m,k] x [k,n] -> [m,n]; [k] x [k,n] -> [n].
Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
/// Same shape, or b of shape [n] broadcast over the rows of a [m,n], or scalar b.
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
Tensor sub(Tape& tape, const Tensor& a, const Tensor& b);
Tensor mul(Tape& tape, const Tensor& a, const Tensor& b);
/// scale * a + shift.
Tensor affine(Tape& tape, const Tensor& a, double scale, double shift);
/// x [Cin, L], w [Cout, Cin, K], bias [Cout] -> [Cout, L - K + 1]; stride 1, no padding.
Tensor conv1d(Tape& tape, const Tensor& x, const Tensor& w, const Tensor& bias);
/// x [C, L] -> [C, floor(L / width)]; non-overlapping windows, first max wins ties.
Tensor maxpool1d(Tape& tape, const Tensor& x, std::size_t width);
Tensor relu(Tape& tape, const Tensor& x);
Tensor tanh(Tape& tape, const Tensor& x);
Tensor sigmoid(Tape& tape, const Tensor& x);
/// Softmax of a vector, or of each row of a matrix.
Tensor softmax(Tape& tape, const Tensor& x);
/// table [V, D], ids -> [T, D].
Tensor embedding_lookup(Tape& tape, const Tensor& table, std::span<const std::size_t> ids);
/// Concatenation of vectors.
Tensor concat(Tape& tape, const std::vector<Tensor>& parts);
Tensor reshape(Tape& tape, const Tensor& x, Shape shape);
Tensor flatten(Tape& tape, const Tensor& x);
/// Row i of a matrix as a vector.
Tensor row(Tape& tape, const Tensor& x, std::size_t i);
/// Columns [begin, begin + count) of a vector.
Tensor slice(Tape& tape, const Tensor& x, std::size_t begin, std::size_t count);
/// Inverted dropout: kept entries are scaled by 1 / (1 - rate). Identity when
/// !train or rate == 0.
Tensor dropout(Tape& tape, const Tensor& x, double rate, Rng& rng, bool train);
/// x [T, D]: one keep/drop draw per channel D, shared by every position.
Tensor spatial_dropout(Tape& tape, const Tensor& x, double rate, Rng& rng, bool train);
/// -sum(target * log(p)) for a vector, mean over rows for a matrix.
/// target has the same shape; probabilities are clamped below at 1e-300.
Tensor cross_entropy(Tape& tape, const Tensor& probs, const Tensor& target);
Tensor sum(Tape& tape, const Tensor& x);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;
};

/// One bias-corrected Adam update in place. Throws ShapeMismatch.
void adam_step(std::span<double> param, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg);

class Adam {
 public:
  explicit Adam(std::vector<Tensor> params, AdamConfig cfg = {});
  /// Updates every parameter from its gradient (missing gradients count as 0).
  void step();
  void zero_grad();
  const AdamConfig& config() const { return cfg_; }

 private:
  std::vector<Tensor> params_;
  std::vector<AdamState> states_;
  AdamConfig cfg_;
};

struct GradcheckResult {
  double max_rel_error = 0;
  std::size_t checked = 0;
  std::size_t worst_param = 0;
  std::size_t worst_index = 0;
};

/// Compares reverse-mode gradients of the scalar `f` against central
/// differences with step h, using |a - n| / max(|a|, |n|, 1e-6). `f` must be
/// deterministic (build any dropout generator inside it).
GradcheckResult gradcheck(const std::function<Tensor(Tape&)>& f, const std::vector<Tensor>& params,
                          double h = 1e-5);

}  // namespace hwk::ad
