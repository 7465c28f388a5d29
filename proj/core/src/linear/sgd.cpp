// SPDX-License-Identifier: Apache-2.0
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_map>

#include "hwk/error.hpp"
#include "hwk/linear.hpp"
#include "hwk/random.hpp"

namespace hwk {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_value(Loss loss, double z) {
  if (loss == Loss::Hinge) return std::max(0.0, 1.0 - z);
  // log(1 + exp(-z)) without overflow
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

/// -dloss/dz.
double loss_slope(Loss loss, double z) {
  if (loss == Loss::Hinge) return z < 1.0 ? 1.0 : 0.0;
  return sigmoid(-z);
}

double soft_threshold(double w, double t) {
  if (w > t) return w - t;
  if (w < -t) return w + t;
  return 0.0;
}

/// Training rows after merging exact duplicates; weights average to 1.
struct Rows {
  std::vector<const FeatureVector*> x;
  std::vector<double> y;  // +-1
  std::vector<double> weight;
  std::size_t dim = 0;
};

void append_bits(std::string& key, const void* p, std::size_t n) {
  key.append(static_cast<const char*>(p), n);
}

Rows prepare(std::span<const FeatureVector> X, std::span<const int> y, std::vector<int>& classes) {
  if (X.size() != y.size())
    throw Error(Errc::DimensionMismatch, fmt::format("{} feature vectors vs {} labels", X.size(), y.size()));
  if (X.size() < 2) throw Error(Errc::SingleClass, "training needs at least two examples");
  classes.assign(y.begin(), y.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw Error(Errc::SingleClass, "training labels contain a single class");
  if (classes.size() > 2)
    throw Error(Errc::InvalidArgument, "binary training got more than two classes; use one-vs-rest");

  Rows rows;
  rows.dim = X[0].dim();
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].dim() != rows.dim)
      throw Error(Errc::DimensionMismatch,
                  fmt::format("row {} has {} columns, row 0 has {}", i, X[i].dim(), rows.dim));
    const double label = y[i] == classes[1] ? 1.0 : -1.0;
    std::string key;
    append_bits(key, &label, sizeof label);
    X[i].for_each([&](std::size_t col, double v) {
      if (v == 0.0) return;
      append_bits(key, &col, sizeof col);
      append_bits(key, &v, sizeof v);
    });
    const auto [it, fresh] = seen.emplace(std::move(key), rows.x.size());
    if (fresh) {
      rows.x.push_back(&X[i]);
      rows.y.push_back(label);
      rows.weight.push_back(1.0);
    } else {
      rows.weight[it->second] += 1.0;
    }
  }
  const double scale = static_cast<double>(rows.x.size()) / static_cast<double>(X.size());
  for (double& w : rows.weight) w *= scale;
  return rows;
}

double rows_objective(const Rows& rows, Loss loss, Penalty penalty, double lambda,
                      const std::vector<double>& w, double b) {
  double total = 0;
  for (std::size_t i = 0; i < rows.x.size(); ++i)
    total += rows.weight[i] * loss_value(loss, rows.y[i] * (rows.x[i]->dot(w) + b));
  total /= static_cast<double>(rows.x.size());
  double reg = 0;
  if (penalty == Penalty::L2) {
    for (double v : w) reg += 0.5 * v * v;
  } else {
    for (double v : w) reg += std::abs(v);
  }
  return total + lambda * reg;
}

double default_eta0(const Rows& rows) {
  double r2 = 0;
  for (const auto* x : rows.x) r2 = std::max(r2, x->squared_norm());
  return 1.0 / (r2 + 1.0);
}

/// Averaged SGD with the scaled-vector representation w = w_ / w_div and the
/// running average (a_ + w_frac * w_) / a_div, so each step costs O(nnz).
class AveragedSgd {
 public:
  AveragedSgd(std::size_t dim, std::size_t avg_start) : w_(dim, 0.0), a_(dim, 0.0), avg_start_(avg_start) {}

  void step(const FeatureVector& x, double y, double weight, Loss loss, double eta, double lambda) {
    if (a_div_ > 1e5 || w_div_ > 1e5) renormalize();
    const double m = x.dot(w_) / w_div_ + wb_;
    w_div_ /= 1.0 - eta * lambda;
    const double d = loss_slope(loss, y * m) * y * weight;
    const double etd = eta * d * w_div_;
    if (etd != 0.0) x.axpy_into(etd, w_);
    ++t_;
    const double mu = 1.0 / static_cast<double>(std::max<std::int64_t>(1, t_ - static_cast<std::int64_t>(avg_start_)));
    if (mu >= 1.0) {
      // a_ stays zero while the average tracks the current iterate.
      a_div_ = w_div_;
      w_frac_ = 1.0;
    } else {
      if (etd != 0.0) x.axpy_into(-w_frac_ * etd, a_);
      a_div_ /= 1.0 - mu;
      w_frac_ += mu * a_div_ / w_div_;
    }
    wb_ += eta * d;
    ab_ += mu * (wb_ - ab_);
  }

  std::int64_t steps() const { return t_; }

  std::vector<double> averaged() const {
    std::vector<double> out(w_.size());
    for (std::size_t i = 0; i < w_.size(); ++i) out[i] = (a_[i] + w_frac_ * w_[i]) / a_div_;
    return out;
  }
  double averaged_bias() const { return ab_; }

 private:
  void renormalize() {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      a_[i] = a_[i] / a_div_ + w_[i] * w_frac_ / a_div_;
      w_[i] /= w_div_;
    }
    w_div_ = a_div_ = 1.0;
    w_frac_ = 0.0;
  }

  std::vector<double> w_, a_;
  double w_div_ = 1.0, a_div_ = 1.0, w_frac_ = 0.0;
  double wb_ = 0.0, ab_ = 0.0;
  std::int64_t t_ = 0;
  std::size_t avg_start_;
};

/// Proximal SGD for the L1 penalty. Soft-thresholds compose additively, so
/// each weight is brought up to date only when its column is touched.
class ProximalSgd {
 public:
  explicit ProximalSgd(std::size_t dim) : w_(dim, 0.0), applied_(dim, 0.0) {}

  void step(const FeatureVector& x, double y, double weight, Loss loss, double eta, double lambda) {
    x.for_each([&](std::size_t i, double) { catch_up(i); });
    const double m = x.dot(w_) + b_;
    const double d = loss_slope(loss, y * m) * y * weight;
    if (d != 0.0) x.axpy_into(eta * d, w_);
    b_ += eta * d;
    pending_ += eta * lambda;
    ++t_;
  }

  void settle() {
    for (std::size_t i = 0; i < w_.size(); ++i) catch_up(i);
  }

  std::int64_t steps() const { return t_; }
  const std::vector<double>& weights() const { return w_; }
  double bias() const { return b_; }

 private:
  void catch_up(std::size_t i) {
    w_[i] = soft_threshold(w_[i], pending_ - applied_[i]);
    applied_[i] = pending_;
  }

  std::vector<double> w_, applied_;
  double b_ = 0.0;
  double pending_ = 0.0;
  std::int64_t t_ = 0;
};

/// Full-batch proximal gradient with backtracking, started from the SGD
/// solution. Stochastic steps leave small residual weights on columns whose
/// optimum is zero; the batch prox step settles them exactly.
double polish_l1(const Rows& rows, Loss loss, double lambda, std::vector<double>& w, double& b,
                 int max_iter) {
  const auto n = static_cast<double>(rows.x.size());
  auto smooth = [&](const std::vector<double>& ww, double bb, std::vector<double>* grad, double* gb) {
    double f = 0;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    if (gb) *gb = 0;
    for (std::size_t i = 0; i < rows.x.size(); ++i) {
      const double z = rows.y[i] * (rows.x[i]->dot(ww) + bb);
      f += rows.weight[i] * loss_value(loss, z);
      if (grad) {
        const double d = -loss_slope(loss, z) * rows.y[i] * rows.weight[i] / n;
        if (d != 0.0) rows.x[i]->axpy_into(d, *grad);
        *gb += d;
      }
    }
    return f / n;
  };
  auto l1 = [](const std::vector<double>& ww) {
    double r = 0;
    for (double v : ww) r += std::abs(v);
    return r;
  };

  std::vector<double> g(w.size()), cand(w.size());
  double gb = 0;
  double L = 1.0;
  double f = smooth(w, b, &g, &gb);
  double obj = f + lambda * l1(w);
  for (int it = 0; it < max_iter; ++it) {
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      double quad = 0, lin = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        cand[j] = soft_threshold(w[j] - g[j] / L, lambda / L);
        const double dj = cand[j] - w[j];
        lin += g[j] * dj;
        quad += dj * dj;
      }
      const double cb = b - gb / L;
      lin += gb * (cb - b);
      quad += (cb - b) * (cb - b);
      const double fc = smooth(cand, cb, nullptr, nullptr);
      if (fc <= f + lin + 0.5 * L * quad + 1e-15) {
        const double oc = fc + lambda * l1(cand);
        if (oc > obj) break;  // non-smooth losses can stall; stop rather than ascend
        moved = quad > 0;
        const double gain = obj - oc;
        std::swap(w, cand);
        b = cb;
        obj = oc;
        f = smooth(w, b, &g, &gb);
        L = std::max(L * 0.5, 1e-12);
        if (gain <= 1e-13 * std::max(1.0, std::abs(obj))) moved = false;
        break;
      }
      L *= 2.0;
    }
    if (!moved) break;
  }
  return obj;
}

template <typename Solver, typename Extract, typename Eta>
void run_epochs(const Rows& rows, const TrainConfig& cfg, double lambda, Solver solver, Extract extract,
                Eta eta_at, LinearModel& model, TrainTrace* trace) {
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(rows.x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> best_w(rows.dim, 0.0);
  double best_b = 0.0;
  double best_obj = rows_objective(rows, cfg.loss, cfg.penalty, lambda, best_w, best_b);
  if (trace) trace->objective.push_back(best_obj);

  Solver accepted = solver;
  double eta0 = cfg.eta0 > 0 ? cfg.eta0 : default_eta0(rows);
  if (cfg.penalty == Penalty::L2) eta0 = std::min(eta0, 0.5 / lambda);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t i : order)
      solver.step(*rows.x[i], rows.y[i], rows.weight[i], cfg.loss, eta_at(eta0, solver.steps()), lambda);
    auto [w, b] = extract(solver);
    const double obj = rows_objective(rows, cfg.loss, cfg.penalty, lambda, w, b);
    if (std::isfinite(obj) && obj <= best_obj) {
      best_obj = obj;
      best_w = std::move(w);
      best_b = b;
      accepted = solver;
      if (trace) trace->objective.push_back(obj);
    } else {
      solver = accepted;
      eta0 *= 0.5;
      if (trace) ++trace->rejected_epochs;
    }
  }
  if (cfg.penalty == Penalty::L1) {
    const double polished = polish_l1(rows, cfg.loss, lambda, best_w, best_b, 500);
    if (trace) trace->objective.push_back(polished);
  }
  model.weights = std::move(best_w);
  model.bias = best_b;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(C > 0) || !std::isfinite(C)) throw Error(Errc::InvalidArgument, fmt::format("C must be > 0, got {}", C));
  if (epochs < 1) throw Error(Errc::InvalidArgument, "epochs must be >= 1");
  if (eta0 < 0) throw Error(Errc::InvalidArgument, "eta0 must be >= 0");
}

double objective(const LinearModel& model, std::span<const FeatureVector> X, std::span<const int> y) {
  if (X.size() != y.size() || X.empty()) throw Error(Errc::DimensionMismatch, "objective needs matching rows");
  double total = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double label = y[i] == model.classes[1] ? 1.0 : -1.0;
    total += loss_value(model.loss, label * model.margin(X[i]));
  }
  total /= static_cast<double>(X.size());
  double reg = 0;
  for (double v : model.weights) reg += model.penalty == Penalty::L2 ? 0.5 * v * v : std::abs(v);
  return total + reg / model.C;
}

LinearModel train(std::span<const FeatureVector> X, std::span<const int> y, const TrainConfig& cfg,
                  TrainTrace* trace) {
  cfg.validate();
  LinearModel model;
  const Rows rows = prepare(X, y, model.classes);
  model.loss = cfg.loss;
  model.penalty = cfg.penalty;
  model.C = cfg.C;
  const double lambda = 1.0 / cfg.C;
  const auto n = static_cast<double>(rows.x.size());

  if (cfg.penalty == Penalty::L2) {
    run_epochs(
        rows, cfg, lambda, AveragedSgd(rows.dim, rows.x.size()),
        [](const AveragedSgd& s) { return std::pair{s.averaged(), s.averaged_bias()}; },
        [lambda](double eta0, std::int64_t t) {
          return eta0 / std::pow(1.0 + lambda * eta0 * static_cast<double>(t), 0.75);
        },
        model, trace);
  } else {
    run_epochs(
        rows, cfg, lambda, ProximalSgd(rows.dim),
        [](ProximalSgd& s) {
          s.settle();
          return std::pair{s.weights(), s.bias()};
        },
        [n](double eta0, std::int64_t t) { return eta0 / std::sqrt(1.0 + static_cast<double>(t) / n); }, model,
        trace);
  }
  return model;
}

double fit_calibration(const LinearModel& model, std::span<const FeatureVector> X, std::span<const int> y) {
  if (X.size() != y.size() || X.empty()) throw Error(Errc::DimensionMismatch, "calibration needs matching rows");
  std::vector<double> ym;
  ym.reserve(X.size());
  for (std::size_t i = 0; i < X.size(); ++i)
    ym.push_back((y[i] == model.classes[1] ? 1.0 : -1.0) * model.margin(X[i]));
  // d/da sum log sigmoid(a * ym) is decreasing in a; bisect its root in log-space.
  auto slope = [&](double a) {
    double s = 0;
    for (double v : ym) s += v * sigmoid(-a * v);
    return s;
  };
  double lo = std::log(1e-6), hi = std::log(1e6);
  if (slope(std::exp(lo)) <= 0) return std::exp(lo);
  if (slope(std::exp(hi)) >= 0) return std::exp(hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(std::exp(mid)) > 0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

std::vector<std::size_t> l1_reduce(std::span<const FeatureVector> X, std::span<const int> y, double C,
                                   std::uint64_t seed, int epochs) {
  TrainConfig cfg;
  cfg.loss = Loss::Logistic;
  cfg.penalty = Penalty::L1;
  cfg.C = C;
  cfg.seed = seed;
  cfg.epochs = epochs;
  const auto model = train(X, y, cfg);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < model.weights.size(); ++i)
    if (model.weights[i] != 0.0) keep.push_back(i);
  if (keep.empty())
    throw Error(Errc::AllZero, fmt::format("L1 fit with C = {} zeroed every weight; try a larger C", C));
  return keep;
}

}  // namespace hwk
