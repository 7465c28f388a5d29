// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hwk/autodiff.hpp"
#include "hwk/error.hpp"
#include "tensor_impl.hpp"

namespace hwk::ad {

namespace {

using Ptr = std::shared_ptr<Tensor::Impl>;

constexpr double kFloor = 1e-300;

bool tracking(const Tape& tape, std::initializer_list<const Tensor*> inputs) {
  if (!tape.recording()) return false;
  for (const auto* t : inputs)
    if (t->requires_grad()) return true;
  return false;
}

[[noreturn]] void mismatch(std::string_view op, const Tensor& a, const Tensor& b) {
  throw Error(Errc::ShapeMismatch,
              fmt::format("{}: incompatible shapes {} and {}", op, shape_string(a.shape()), shape_string(b.shape())));
}

/// Gradient of the op output, or nullptr when nothing downstream used it.
const std::vector<double>* upstream(const Ptr& out) { return out->grad.empty() ? nullptr : &out->grad; }

std::vector<double>* sink(const Ptr& in) { return in->requires_grad ? &grad_of(*in) : nullptr; }

template <typename F>
Tensor unary(Tape& tape, const Tensor& x, F&& value, auto&& derivative) {
  std::vector<double> out(x.size());
  const auto xd = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(xd[i]);
  const bool track = tracking(tape, {&x});
  Tensor y(x.shape(), std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, derivative] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t i = 0; i < gx->size(); ++i) (*gx)[i] += (*go)[i] * derivative(xi->data[i], yi->data[i]);
    });
  }
  return y;
}

enum class Broadcast { Same, Row, Scalar };

Broadcast broadcast_kind(std::string_view op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return Broadcast::Same;
  if (b.size() == 1 && b.rank() <= 1) return Broadcast::Scalar;
  if (a.rank() == 2 && b.rank() == 1 && b.dim(0) == a.dim(1)) return Broadcast::Row;
  mismatch(op, a, b);
}

template <typename Combine, typename DA, typename DB>
Tensor binary(Tape& tape, std::string_view name, const Tensor& a, const Tensor& b, Combine combine, DA da, DB db) {
  const auto kind = broadcast_kind(name, a, b);
  const std::size_t n = a.size();
  const std::size_t cols = kind == Broadcast::Row ? b.size() : 1;
  auto bidx = [kind, cols](std::size_t i) {
    return kind == Broadcast::Same ? i : kind == Broadcast::Scalar ? 0 : i % cols;
  };
  std::vector<double> out(n);
  const auto ad = a.data(), bd = b.data();
  for (std::size_t i = 0; i < n; ++i) out[i] = combine(ad[i], bd[bidx(i)]);
  const bool track = tracking(tape, {&a, &b});
  Tensor y(a.shape(), std::move(out), track);
  if (track) {
    Ptr ai = a.impl(), bi = b.impl(), yi = y.impl();
    tape.record(y, [ai, bi, yi, bidx, da, db, n] {
      const auto* go = upstream(yi);
      if (!go) return;
      auto* ga = sink(ai);
      auto* gb = sink(bi);
      for (std::size_t i = 0; i < n; ++i) {
        const double av = ai->data[i], bv = bi->data[bidx(i)];
        if (ga) (*ga)[i] += (*go)[i] * da(av, bv);
        if (gb) (*gb)[bidx(i)] += (*go)[i] * db(av, bv);
      }
    });
  }
  return y;
}

}  // namespace

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (b.rank() != 2 || (a.rank() != 1 && a.rank() != 2)) mismatch("matmul", a, b);
  const std::size_t m = a.rank() == 1 ? 1 : a.dim(0);
  const std::size_t k = a.rank() == 1 ? a.dim(0) : a.dim(1);
  const std::size_t n = b.dim(1);
  if (b.dim(0) != k) mismatch("matmul", a, b);
  std::vector<double> out(m * n, 0.0);
  const auto ad = a.data(), bd = b.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ad[i * k + p];
      if (av == 0.0) continue;
      const double* brow = &bd[p * n];
      double* orow = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  const bool track = tracking(tape, {&a, &b});
  Tensor y(a.rank() == 1 ? Shape{n} : Shape{m, n}, std::move(out), track);
  if (track) {
    Ptr ai = a.impl(), bi = b.impl(), yi = y.impl();
    tape.record(y, [ai, bi, yi, m, k, n] {
      const auto* go = upstream(yi);
      if (!go) return;
      if (auto* ga = sink(ai))
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double s = 0;
            const double* brow = &bi->data[p * n];
            const double* grow = &(*go)[i * n];
            for (std::size_t j = 0; j < n; ++j) s += grow[j] * brow[j];
            (*ga)[i * k + p] += s;
          }
      if (auto* gb = sink(bi))
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            const double av = ai->data[i * k + p];
            if (av == 0.0) continue;
            const double* grow = &(*go)[i * n];
            double* gbrow = &(*gb)[p * n];
            for (std::size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
          }
    });
  }
  return y;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary(
      tape, "add", a, b, [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Tensor sub(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary(
      tape, "sub", a, b, [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Tensor mul(Tape& tape, const Tensor& a, const Tensor& b) {
  return binary(
      tape, "mul", a, b, [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Tensor affine(Tape& tape, const Tensor& a, double scale, double shift) {
  return unary(
      tape, a, [=](double x) { return scale * x + shift; }, [=](double, double) { return scale; });
}

Tensor relu(Tape& tape, const Tensor& x) {
  return unary(
      tape, x, [](double v) { return v > 0 ? v : 0.0; }, [](double v, double) { return v > 0 ? 1.0 : 0.0; });
}

Tensor tanh(Tape& tape, const Tensor& x) {
  return unary(
      tape, x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(Tape& tape, const Tensor& x) {
  return unary(
      tape, x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor conv1d(Tape& tape, const Tensor& x, const Tensor& w, const Tensor& bias) {
  if (x.rank() != 2 || w.rank() != 3 || bias.rank() != 1 || w.dim(1) != x.dim(0) || bias.dim(0) != w.dim(0))
    throw Error(Errc::ShapeMismatch, fmt::format("conv1d: input {}, weight {}, bias {}", shape_string(x.shape()),
                                                 shape_string(w.shape()), shape_string(bias.shape())));
  const std::size_t cin = x.dim(0), len = x.dim(1), cout = w.dim(0), k = w.dim(2);
  if (k > len || k == 0)
    throw Error(Errc::ShapeMismatch, fmt::format("conv1d: kernel {} does not fit length {}", k, len));
  const std::size_t olen = len - k + 1;
  std::vector<double> out(cout * olen);
  const auto xd = x.data(), wd = w.data(), bd = bias.data();
  for (std::size_t o = 0; o < cout; ++o) {
    double* orow = &out[o * olen];
    std::fill(orow, orow + olen, bd[o]);
    for (std::size_t c = 0; c < cin; ++c)
      for (std::size_t j = 0; j < k; ++j) {
        const double wv = wd[(o * cin + c) * k + j];
        const double* xrow = &xd[c * len + j];
        for (std::size_t t = 0; t < olen; ++t) orow[t] += wv * xrow[t];
      }
  }
  const bool track = tracking(tape, {&x, &w, &bias});
  Tensor y({cout, olen}, std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), wi = w.impl(), bi = bias.impl(), yi = y.impl();
    tape.record(y, [=] {
      const auto* go = upstream(yi);
      if (!go) return;
      auto* gx = sink(xi);
      auto* gw = sink(wi);
      auto* gb = sink(bi);
      for (std::size_t o = 0; o < cout; ++o) {
        const double* grow = &(*go)[o * olen];
        if (gb)
          for (std::size_t t = 0; t < olen; ++t) (*gb)[o] += grow[t];
        for (std::size_t c = 0; c < cin; ++c)
          for (std::size_t j = 0; j < k; ++j) {
            const std::size_t widx = (o * cin + c) * k + j;
            if (gw) {
              double s = 0;
              const double* xrow = &xi->data[c * len + j];
              for (std::size_t t = 0; t < olen; ++t) s += grow[t] * xrow[t];
              (*gw)[widx] += s;
            }
            if (gx) {
              const double wv = wi->data[widx];
              double* gxrow = &(*gx)[c * len + j];
              for (std::size_t t = 0; t < olen; ++t) gxrow[t] += grow[t] * wv;
            }
          }
      }
    });
  }
  return y;
}

Tensor maxpool1d(Tape& tape, const Tensor& x, std::size_t width) {
  if (x.rank() != 2 || width == 0 || x.dim(1) / width == 0)
    throw Error(Errc::ShapeMismatch, fmt::format("maxpool1d: width {} over {}", width, shape_string(x.shape())));
  const std::size_t c = x.dim(0), len = x.dim(1), olen = len / width;
  std::vector<double> out(c * olen);
  std::vector<std::size_t> arg(c * olen);
  const auto xd = x.data();
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t t = 0; t < olen; ++t) {
      const std::size_t base = ch * len + t * width;
      std::size_t best = base;
      for (std::size_t j = 1; j < width; ++j)
        if (xd[base + j] > xd[best]) best = base + j;
      out[ch * olen + t] = xd[best];
      arg[ch * olen + t] = best;
    }
  const bool track = tracking(tape, {&x});
  Tensor y({c, olen}, std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, arg = std::move(arg)] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t i = 0; i < arg.size(); ++i) (*gx)[arg[i]] += (*go)[i];
    });
  }
  return y;
}

Tensor softmax(Tape& tape, const Tensor& x) {
  if (x.rank() > 2 || x.size() == 0) throw Error(Errc::ShapeMismatch, "softmax needs a vector or matrix");
  const std::size_t cols = x.rank() == 2 ? x.dim(1) : x.size();
  const std::size_t rows = x.size() / cols;
  std::vector<double> out(x.size());
  const auto xd = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = &xd[r * cols];
    double* o = &out[r * cols];
    const double mx = *std::max_element(in, in + cols);
    double z = 0;
    for (std::size_t j = 0; j < cols; ++j) z += (o[j] = std::exp(in[j] - mx));
    for (std::size_t j = 0; j < cols; ++j) o[j] /= z;
  }
  const bool track = tracking(tape, {&x});
  Tensor y(x.shape(), std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, rows, cols] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t r = 0; r < rows; ++r) {
        const double* yv = &yi->data[r * cols];
        const double* g = &(*go)[r * cols];
        double dot = 0;
        for (std::size_t j = 0; j < cols; ++j) dot += g[j] * yv[j];
        for (std::size_t j = 0; j < cols; ++j) (*gx)[r * cols + j] += yv[j] * (g[j] - dot);
      }
    });
  }
  return y;
}

Tensor embedding_lookup(Tape& tape, const Tensor& table, std::span<const std::size_t> ids) {
  if (table.rank() != 2) throw Error(Errc::ShapeMismatch, "embedding table must be [V, D]");
  const std::size_t vocab = table.dim(0), d = table.dim(1);
  std::vector<double> out(ids.size() * d);
  const auto td = table.data();
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= vocab)
      throw Error(Errc::ShapeMismatch, fmt::format("token id {} outside vocabulary of {}", ids[t], vocab));
    std::copy_n(&td[ids[t] * d], d, &out[t * d]);
  }
  const bool track = tracking(tape, {&table});
  Tensor y({ids.size(), d}, std::move(out), track);
  if (track) {
    Ptr ti = table.impl(), yi = y.impl();
    tape.record(y, [ti, yi, d, idv = std::vector<std::size_t>(ids.begin(), ids.end())] {
      const auto* go = upstream(yi);
      auto* gt = sink(ti);
      if (!go || !gt) return;
      for (std::size_t t = 0; t < idv.size(); ++t)
        for (std::size_t j = 0; j < d; ++j) (*gt)[idv[t] * d + j] += (*go)[t * d + j];
    });
  }
  return y;
}

Tensor concat(Tape& tape, const std::vector<Tensor>& parts) {
  std::vector<double> out;
  bool track = false;
  for (const auto& p : parts) {
    out.insert(out.end(), p.data().begin(), p.data().end());
    track = track || tracking(tape, {&p});
  }
  const std::size_t total = out.size();
  Tensor y({total}, std::move(out), track);
  if (track) {
    std::vector<Ptr> ins;
    for (const auto& p : parts) ins.push_back(p.impl());
    Ptr yi = y.impl();
    tape.record(y, [ins, yi] {
      const auto* go = upstream(yi);
      if (!go) return;
      std::size_t off = 0;
      for (const auto& in : ins) {
        const std::size_t n = in->data.size();
        if (auto* g = sink(in))
          for (std::size_t i = 0; i < n; ++i) (*g)[i] += (*go)[off + i];
        off += n;
      }
    });
  }
  return y;
}

Tensor reshape(Tape& tape, const Tensor& x, Shape shape) {
  if (numel(shape) != x.size())
    throw Error(Errc::ShapeMismatch,
                fmt::format("reshape {} to {}", shape_string(x.shape()), shape_string(shape)));
  std::vector<double> out(x.data().begin(), x.data().end());
  const bool track = tracking(tape, {&x});
  Tensor y(std::move(shape), std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t i = 0; i < gx->size(); ++i) (*gx)[i] += (*go)[i];
    });
  }
  return y;
}

Tensor flatten(Tape& tape, const Tensor& x) { return reshape(tape, x, {x.size()}); }

Tensor slice(Tape& tape, const Tensor& x, std::size_t begin, std::size_t count) {
  if (x.rank() != 1 || begin + count > x.size())
    throw Error(Errc::ShapeMismatch,
                fmt::format("slice [{}, {}) of {}", begin, begin + count, shape_string(x.shape())));
  std::vector<double> out(x.data().begin() + static_cast<std::ptrdiff_t>(begin),
                          x.data().begin() + static_cast<std::ptrdiff_t>(begin + count));
  const bool track = tracking(tape, {&x});
  Tensor y({count}, std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, begin, count] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t i = 0; i < count; ++i) (*gx)[begin + i] += (*go)[i];
    });
  }
  return y;
}

Tensor row(Tape& tape, const Tensor& x, std::size_t i) {
  if (x.rank() != 2 || i >= x.dim(0))
    throw Error(Errc::ShapeMismatch, fmt::format("row {} of {}", i, shape_string(x.shape())));
  const std::size_t n = x.dim(1);
  std::vector<double> out(x.data().begin() + static_cast<std::ptrdiff_t>(i * n),
                          x.data().begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
  const bool track = tracking(tape, {&x});
  Tensor y({n}, std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, i, n] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t j = 0; j < n; ++j) (*gx)[i * n + j] += (*go)[j];
    });
  }
  return y;
}

namespace {

Tensor masked(Tape& tape, const Tensor& x, std::vector<double> mask, std::size_t period) {
  std::vector<double> out(x.size());
  const auto xd = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xd[i] * mask[i % period];
  const bool track = tracking(tape, {&x});
  Tensor y(x.shape(), std::move(out), track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi, mask = std::move(mask), period] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (std::size_t i = 0; i < gx->size(); ++i) (*gx)[i] += (*go)[i] * mask[i % period];
    });
  }
  return y;
}

void check_rate(double rate) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(Errc::InvalidArgument, fmt::format("dropout rate {} outside [0, 1)", rate));
}

}  // namespace

Tensor dropout(Tape& tape, const Tensor& x, double rate, Rng& rng, bool train) {
  check_rate(rate);
  if (!train || rate == 0.0) return x;
  std::vector<double> mask(x.size());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = rng.bernoulli(rate) ? 0.0 : keep_scale;
  return masked(tape, x, std::move(mask), x.size());
}

Tensor spatial_dropout(Tape& tape, const Tensor& x, double rate, Rng& rng, bool train) {
  check_rate(rate);
  if (x.rank() != 2) throw Error(Errc::ShapeMismatch, "spatial dropout needs [T, D]");
  if (!train || rate == 0.0) return x;
  std::vector<double> mask(x.dim(1));
  const double keep_scale = 1.0 / (1.0 - rate);
  for (auto& m : mask) m = rng.bernoulli(rate) ? 0.0 : keep_scale;
  return masked(tape, x, std::move(mask), x.dim(1));
}

Tensor cross_entropy(Tape& tape, const Tensor& probs, const Tensor& target) {
  if (probs.shape() != target.shape() || probs.rank() > 2 || probs.size() == 0) mismatch("cross_entropy", probs, target);
  const double rows = probs.rank() == 2 ? static_cast<double>(probs.dim(0)) : 1.0;
  double loss = 0;
  const auto pd = probs.data(), td = target.data();
  for (std::size_t i = 0; i < pd.size(); ++i)
    if (td[i] != 0.0) loss -= td[i] * std::log(std::max(pd[i], kFloor));
  const bool track = tracking(tape, {&probs});
  Tensor y = Tensor::scalar(loss / rows, track);
  if (track) {
    Ptr pi = probs.impl(), ti = target.impl(), yi = y.impl();
    tape.record(y, [pi, ti, yi, rows] {
      const auto* go = upstream(yi);
      auto* gp = sink(pi);
      if (!go || !gp) return;
      for (std::size_t i = 0; i < gp->size(); ++i)
        if (ti->data[i] != 0.0) (*gp)[i] -= (*go)[0] * ti->data[i] / std::max(pi->data[i], kFloor) / rows;
    });
  }
  return y;
}

Tensor sum(Tape& tape, const Tensor& x) {
  double s = 0;
  for (double v : x.data()) s += v;
  const bool track = tracking(tape, {&x});
  Tensor y = Tensor::scalar(s, track);
  if (track) {
    Ptr xi = x.impl(), yi = y.impl();
    tape.record(y, [xi, yi] {
      const auto* go = upstream(yi);
      auto* gx = sink(xi);
      if (!go || !gx) return;
      for (auto& g : *gx) g += (*go)[0];
    });
  }
  return y;
}

}  // namespace hwk::ad
