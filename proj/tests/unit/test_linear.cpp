// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hwk/error.hpp"
#include "hwk/eval.hpp"
#include "hwk/linear.hpp"
#include "hwk/random.hpp"

using namespace hwk;

namespace {

FeatureVector dense(std::vector<double> v) {
  FeatureVector x;
  x.dense = std::move(v);
  return x;
}

struct Data {
  std::vector<FeatureVector> X;
  std::vector<int> y;
};

Data separable_toy() {
  Data d;
  const double pts[8][2] = {{2, 1}, {1.5, 2}, {3, 0.5}, {2.5, 2.5}, {-2, -1}, {-1, -2.5}, {-3, 0.2}, {-0.5, -2}};
  for (int i = 0; i < 8; ++i) {
    d.X.push_back(dense({pts[i][0], pts[i][1]}));
    d.y.push_back(i < 4 ? 1 : 0);
  }
  return d;
}

Data noisy_with_noise_columns(std::uint64_t seed, int n, int noise_cols) {
  Rng rng(seed);
  Data d;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v{rng.normal(), rng.normal()};
    int label = v[0] + v[1] > 0 ? 1 : 0;
    if (i < 2) label = i;  // both classes always present
    for (int j = 0; j < noise_cols; ++j) v.push_back(rng.normal());
    d.X.push_back(dense(std::move(v)));
    d.y.push_back(label);
  }
  return d;
}

double accuracy(const LinearModel& m, const Data& d) {
  int ok = 0;
  for (std::size_t i = 0; i < d.X.size(); ++i) ok += m.predict(d.X[i]) == d.y[i];
  return double(ok) / d.X.size();
}

}  // namespace

TEST(Linear, SeparableToyBothLosses) {
  const auto d = separable_toy();
  for (Loss loss : {Loss::Logistic, Loss::Hinge})
    for (Penalty pen : {Penalty::L1, Penalty::L2}) {
      TrainConfig cfg;
      cfg.loss = loss;
      cfg.penalty = pen;
      cfg.C = 100;
      cfg.seed = 3;
      EXPECT_EQ(accuracy(train(d.X, d.y, cfg), d), 1.0) << to_string(loss) << to_string(pen);
    }
}

TEST(Linear, ObjectiveCheckpointsNonIncreasing) {
  for (std::uint64_t seed = 0; seed < 6; ++seed)
    for (Loss loss : {Loss::Logistic, Loss::Hinge})
      for (Penalty pen : {Penalty::L1, Penalty::L2}) {
        const auto d = noisy_with_noise_columns(seed, 60, 5);
        TrainConfig cfg;
        cfg.loss = loss;
        cfg.penalty = pen;
        cfg.C = 1.0;
        cfg.seed = seed;
        TrainTrace trace;
        const auto m = train(d.X, d.y, cfg, &trace);
        ASSERT_GE(trace.objective.size(), 2u);
        for (std::size_t i = 1; i < trace.objective.size(); ++i)
          ASSERT_LE(trace.objective[i], trace.objective[i - 1]);
        EXPECT_NEAR(objective(m, d.X, d.y), trace.objective.back(), 1e-9);
      }
}

TEST(Linear, L1ZeroesNoiseColumn) {
  const auto d = noisy_with_noise_columns(1, 200, 1);
  TrainConfig cfg;
  cfg.penalty = Penalty::L1;
  cfg.C = 20.0;
  const auto m = train(d.X, d.y, cfg);
  EXPECT_EQ(m.weights[2], 0.0);
  EXPECT_NE(m.weights[0], 0.0);
}

TEST(Linear, DuplicationInvariance) {
  auto d = noisy_with_noise_columns(2, 40, 3);
  TrainConfig cfg;
  cfg.seed = 9;
  const auto a = train(d.X, d.y, cfg);
  auto dd = d;
  dd.X.insert(dd.X.end(), d.X.begin(), d.X.end());
  dd.y.insert(dd.y.end(), d.y.begin(), d.y.end());
  const auto b = train(dd.X, dd.y, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Linear, Errors) {
  const auto d = separable_toy();
  std::vector<int> ones(d.y.size(), 1);
  try {
    train(d.X, ones, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SingleClass);
  }
  auto bad = d.X;
  bad[3] = dense({1, 2, 3});
  try {
    train(bad, d.y, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
  const auto m = train(d.X, d.y, {});
  EXPECT_THROW(m.predict_proba(dense({1})), Error);
}

TEST(Linear, ProbabilityContract) {
  LinearModel m;
  m.weights = {1.0, -2.0};
  const auto p0 = m.predict_proba(dense({0, 0}));
  EXPECT_DOUBLE_EQ(p0[0], 0.5);
  EXPECT_DOUBLE_EQ(p0[1], 0.5);
  EXPECT_EQ(m.predict(dense({0, 0})), 0);
  Rng rng(4);
  for (Loss loss : {Loss::Logistic, Loss::Hinge}) {
    m.loss = loss;
    m.calibration = 0.7;
    for (int i = 0; i < 1000; ++i) {
      const auto x = dense({rng.normal() * 5, rng.normal() * 5});
      const auto p = m.predict_proba(x);
      EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
      const int argmax = p[1] > p[0] ? 1 : 0;
      EXPECT_EQ(argmax, m.margin(x) > 0 ? 1 : 0);
    }
  }
}

TEST(Linear, HingeScalingInvariance) {
  auto d = noisy_with_noise_columns(5, 50, 2);
  TrainConfig cfg;
  cfg.loss = Loss::Hinge;
  auto m = train(d.X, d.y, cfg);
  std::vector<int> before;
  for (const auto& x : d.X) before.push_back(m.predict(x));
  for (double lambda : {0.01, 3.0, 1e4}) {
    auto s = m;
    for (double& w : s.weights) w *= lambda;
    s.bias *= lambda;
    for (std::size_t i = 0; i < d.X.size(); ++i) EXPECT_EQ(s.predict(d.X[i]), before[i]);
  }
}

TEST(Linear, BruteForceGridEquivalence) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    Data d;
    for (int i = 0; i < 12; ++i) {
      const int label = i % 2;
      d.X.push_back(dense({rng.normal() + (label ? 0.8 : -0.8), rng.normal()}));
      d.y.push_back(label);
    }
    for (Loss loss : {Loss::Logistic, Loss::Hinge}) {
      TrainConfig cfg;
      cfg.loss = loss;
      cfg.C = 1.0;
      cfg.epochs = 400;
      cfg.seed = seed;
      const auto m = train(d.X, d.y, cfg);
      const double sgd = objective(m, d.X, d.y);
      LinearModel probe = m;
      double best = 1e300;
      for (double w0 = -2; w0 <= 2; w0 += 0.02)
        for (double w1 = -2; w1 <= 2; w1 += 0.02)
          for (double b = -2; b <= 2; b += 0.04) {
            probe.weights = {w0, w1};
            probe.bias = b;
            best = std::min(best, objective(probe, d.X, d.y));
          }
      EXPECT_LE(sgd, best * 1.01) << "seed " << seed << " " << to_string(loss);
    }
  }
}

TEST(Linear, SerializeRoundTrip) {
  const auto d = separable_toy();
  auto ovr = one_vs_rest_train(d.X, d.y, {});
  ovr.models[0].vocab_checksum = 0xabcdef;
  const auto back = OvrModel::parse(ovr.serialize());
  EXPECT_EQ(back.serialize(), ovr.serialize());
  EXPECT_THROW(back.models[0].check_vocabulary(0x1234), Error);
  EXPECT_NO_THROW(back.models[0].check_vocabulary(0xabcdef));
}

TEST(L1Reduce, DropsNoiseKeepsSignal) {
  const auto d = noisy_with_noise_columns(7, 200, 40);
  const auto keep = l1_reduce(d.X, d.y, 20.0, 1);
  const std::set<std::size_t> kept(keep.begin(), keep.end());
  EXPECT_TRUE(kept.contains(0));
  EXPECT_TRUE(kept.contains(1));
  const auto noise_kept = kept.size() - 2;
  EXPECT_LE(noise_kept, 4u);
  EXPECT_EQ(l1_reduce(d.X, d.y, 20.0, 1), keep);
  EXPECT_EQ(l1_reduce(d.X, d.y, 1e9, 1).size(), 42u);
  try {
    l1_reduce(d.X, d.y, 1e-4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AllZero);
  }
  const auto px = project(d.X[0], keep);
  EXPECT_EQ(px.dim(), keep.size());
}

TEST(Ovr, TwoClassMatchesBinary) {
  const auto d = noisy_with_noise_columns(3, 40, 2);
  TrainConfig cfg;
  const auto bin = train(d.X, d.y, cfg);
  const auto ovr = one_vs_rest_train(d.X, d.y, cfg);
  ASSERT_EQ(ovr.models.size(), 1u);
  for (const auto& x : d.X) EXPECT_EQ(ovr.predict(x), bin.predict(x));
}

TEST(Ovr, ThreeBlobs) {
  Rng rng(8);
  Data d;
  const double centers[3][2] = {{4, 0}, {-4, 0}, {0, 5}};
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    d.X.push_back(dense({centers[c][0] + 0.5 * rng.normal(), centers[c][1] + 0.5 * rng.normal()}));
    d.y.push_back(c + 10);
  }
  TrainConfig cfg;
  cfg.C = 100;
  const auto m = one_vs_rest_train(d.X, d.y, cfg);
  EXPECT_EQ(one_vs_rest_predict(m, d.X), d.y);
}

TEST(Ovr, TieGoesToLowestIndex) {
  OvrModel m;
  m.classes = {0, 1, 2};
  for (int k = 0; k < 3; ++k) {
    LinearModel lm;
    lm.weights = {0.0};
    m.models.push_back(lm);
  }
  EXPECT_EQ(m.predict(dense({1.0})), 0);
}

TEST(KFold, PartitionAndBalance) {
  std::vector<int> y(100);
  for (int i = 0; i < 100; ++i) y[i] = i < 37 ? 1 : 0;
  const auto folds = stratified_kfold(y, 10, 4);
  ASSERT_EQ(folds.size(), 10u);
  std::vector<int> seen(100, 0);
  for (const auto& f : folds) {
    EXPECT_EQ(f.size(), 10u);
    int pos = 0;
    for (auto i : f) {
      ++seen[i];
      pos += y[i];
    }
    EXPECT_NEAR(pos, 3.7, 1.0);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_THROW(stratified_kfold(std::vector<int>{0, 0, 0, 1}, 2, 0), Error);
}

TEST(GridSearch, SelectsAndIsDeterministic) {
  const auto d = noisy_with_noise_columns(11, 100, 10);
  GridSearchOptions opts;
  opts.k = 5;
  opts.seed = 3;
  const std::vector<GridPoint> one{{Loss::Logistic, Penalty::L2, 0.1}};
  EXPECT_EQ(grid_search_cv(d.X, d.y, one, opts).best_params, one[0]);

  const std::vector<GridPoint> grid{{Loss::Logistic, Penalty::L1, 0.01}, {Loss::Logistic, Penalty::L2, 1000}};
  const auto a = grid_search_cv(d.X, d.y, grid, opts);
  opts.threads = 4;
  const auto b = grid_search_cv(d.X, d.y, grid, opts);
  ASSERT_EQ(a.results.size(), 2u);
  EXPECT_EQ(a.best, b.best);
  for (std::size_t g = 0; g < 2; ++g) EXPECT_EQ(a.results[g].fold_macro_f1, b.results[g].fold_macro_f1);
  const auto winner = a.results[0].mean > a.results[1].mean ? 0u : 1u;
  EXPECT_EQ(a.best, a.results[0].mean == a.results[1].mean ? 0u : winner);
  for (const auto& r : a.results) {
    EXPECT_EQ(r.fold_macro_f1.size(), 5u);
    EXPECT_GE(r.mean, *std::min_element(r.fold_macro_f1.begin(), r.fold_macro_f1.end()));
    EXPECT_LE(r.mean, *std::max_element(r.fold_macro_f1.begin(), r.fold_macro_f1.end()));
  }
}
