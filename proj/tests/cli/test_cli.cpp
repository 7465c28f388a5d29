// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "cli/app.hpp"
#include "cli/config.hpp"
#include "cli/run.hpp"
#include "hwk/corpus.hpp"
#include "hwk/error.hpp"
#include "hwk/random.hpp"

namespace fs = std::filesystem;
using hwk::cli::Config;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result hwk_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hwk::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return hwk::cli::read_file(p); }

/// Noisy two-class corpus with hashtags and all three label columns.
std::string corpus_tsv(std::size_t n, std::uint64_t seed, const std::string& prefix) {
  static const std::vector<std::string> hostile{"vermin", "scum", "filth", "parasites"};
  static const std::vector<std::string> friendly{"neighbors", "friends", "welcome", "family"};
  static const std::vector<std::string> filler{"the", "people", "city", "today", "they", "are",
                                               "our", "new", "street", "go", "home", "now"};
  hwk::Rng rng(seed);
  std::string tsv = "id\ttext\tHS\tTR\tAG\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool hs = rng.bernoulli(0.45);
    std::string text;
    for (std::size_t w = 0, m = 4 + rng.below(5); w < m; ++w) text += filler[rng.below(filler.size())] + " ";
    const bool noisy = rng.bernoulli(0.1);
    text += (hs != noisy ? hostile : friendly)[rng.below(4)];
    if (rng.bernoulli(0.3)) text += " #buildthewall";
    const bool tr = hs && rng.bernoulli(0.5), ag = hs && rng.bernoulli(0.5);
    tsv += fmt::format("{}{}\t{}\t{}\t{}\t{}\n", prefix, i, text, int(hs), int(tr), int(ag));
  }
  return tsv;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           fmt::format("hwk_cli_{}_{}", ::testing::UnitTest::GetInstance()->current_test_info()->name(), ::getpid());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    hwk::cli::write_file(dir_ / "train.tsv", corpus_tsv(160, 1, "tr"));
    hwk::cli::write_file(dir_ / "dev.tsv", corpus_tsv(40, 2, "dv"));
    hwk::cli::write_file(dir_ / "test.tsv", corpus_tsv(50, 3, "te"));
    hwk::cli::write_file(dir_ / "desk.cfg",
                         "# small neural settings\ngru.embed_dim = 8\ngru.hidden = 4\ngru.dense = 8,4\n"
                         "cnn.filters = 4\ncnn.dense = 8,4\nneural.epochs = 2\nlinear.C = 20\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(CliConfig, ParsesDottedKeysAndComments) {
  const auto c = Config::parse("# comment\n\nfeatures.n_min = 1\nlinear.C=0.5\n  name = a b  \n", "c.cfg");
  EXPECT_EQ(c.str("features.n_min"), "1");
  EXPECT_DOUBLE_EQ(c.real("linear.C"), 0.5);
  EXPECT_EQ(c.str("name"), "a b");
  EXPECT_EQ(Config::parse(c.snapshot(), "snap").snapshot(), c.snapshot());
}

TEST(CliConfig, ErrorsCarryFileAndLine) {
  auto message = [](const std::function<void()>& f) -> std::string {
    try {
      f();
    } catch (const hwk::Error& e) {
      EXPECT_EQ(e.code(), hwk::Errc::ConfigError);
      return e.what();
    }
    return "no error";
  };
  EXPECT_NE(message([] { Config::parse("a = 1\nno equals sign\n", "x.cfg"); }).find("x.cfg:2"), std::string::npos);
  EXPECT_NE(message([] { Config::parse("a = 1\na = 2\n", "x.cfg"); }).find("x.cfg:2"), std::string::npos);
  EXPECT_NE(message([] {
              auto c = Config::parse("a = 1\nlinear.C = abc\n", "x.cfg");
              c.real("linear.C");
            }).find("x.cfg:2"),
            std::string::npos);
  EXPECT_NE(message([] {
              auto c = Config::parse("model = logreg\nmystery = 3\n", "x.cfg");
              c.resolve({{"model", "logreg"}});
            }).find("x.cfg:2: unknown key 'mystery'"),
            std::string::npos);
}

TEST_F(CliTest, TrainWritesRunDirectory) {
  const auto r = hwk_run({"train", "--model", "logreg", "--config", p("desk.cfg"), "--train", p("train.tsv"), "--dev",
                          p("dev.tsv"), "--test", p("test.tsv"), "--seed", "7", "--out", p("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"config.snapshot", "seed", "metrics.csv", "pipeline.txt", "model_HS.txt", "train.log",
                        "predictions_test.tsv", "confusion_test_HS.svg", "importance_HS.svg"})
    EXPECT_TRUE(fs::exists(dir_ / "run" / f)) << f;
  EXPECT_EQ(slurp(dir_ / "run" / "seed"), "7\n");
  const auto metrics = slurp(dir_ / "run" / "metrics.csv");
  EXPECT_EQ(metrics.rfind("split,dim,metric,value\n", 0), 0u);
  EXPECT_NE(metrics.find("test,HS,macro_f1,"), std::string::npos);
}

TEST_F(CliTest, SameSeedGivesByteIdenticalMetrics) {
  for (const std::string model : {"logreg", "linsvc", "bigru", "charcnn"}) {
    std::string first;
    for (const char* out : {"a", "b"}) {
      const auto r = hwk_run({"train", "--model", model, "--config", p("desk.cfg"), "--train", p("train.tsv"),
                              "--test", p("test.tsv"), "--seed", "11", "--dims", "HS,TR,AG", "--out", p(model + out)});
      ASSERT_EQ(r.code, 0) << r.err;
      const auto m = slurp(dir_ / (model + out) / "metrics.csv");
      if (first.empty()) first = m;
      else EXPECT_EQ(m, first) << model;
    }
    EXPECT_NE(first.find("test,B,subtask_b,"), std::string::npos);
  }
}

TEST_F(CliTest, SnapshotReplaysTheRun) {
  auto r = hwk_run({"train", "--model", "bigru", "--config", p("desk.cfg"), "--train", p("train.tsv"), "--dev",
                    p("dev.tsv"), "--seed", "5", "--out", p("orig")});
  ASSERT_EQ(r.code, 0) << r.err;
  r = hwk_run({"train", "--config", p("orig/config.snapshot"), "--out", p("replay")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"metrics.csv", "config.snapshot", "model_HS.ckpt", "history_HS.csv"})
    EXPECT_EQ(slurp(dir_ / "orig" / f), slurp(dir_ / "replay" / f)) << f;
}

TEST_F(CliTest, GridSearchIsDeterministicAcrossThreadCounts) {
  std::string first;
  for (const char* threads : {"1", "4"}) {
    const auto out = p(std::string("grid") + threads);
    const auto r = hwk_run({"gridsearch", "--train", p("train.tsv"), "--seed", "2", "--folds", "4", "--threads",
                            threads, "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = slurp(fs::path(out) / "gridsearch.csv");
    if (first.empty()) first = csv;
    else EXPECT_EQ(csv, first);
  }
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 21);
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  ::setenv("HWK_SEED", "42", 1);
  const auto r = hwk_run({"train", "--train", p("train.tsv"), "--out", p("env")});
  ::unsetenv("HWK_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "env" / "seed"), "42\n");
}

TEST_F(CliTest, EvaluateTaskB) {
  hwk::cli::write_file(dir_ / "gold.tsv", "id\ttext\tHS\tTR\tAG\n1\ta\t1\t1\t0\n2\tb\t0\t0\t0\n3\tc\t1\t0\t1\n");
  hwk::cli::write_file(dir_ / "pred.tsv", "id\tHS\tTR\tAG\n3\t1\t0\t0\n1\t1\t1\t0\n2\t0\t0\t0\n");
  const auto r = hwk_run({"evaluate", "--pred", p("pred.tsv"), "--gold", p("gold.tsv"), "--task", "b"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("HS.macro_f1=1.000000"), std::string::npos);
  EXPECT_NE(r.out.find("AG.macro_f1=0.400000"), std::string::npos);
  EXPECT_NE(r.out.find("emr=0.666667"), std::string::npos);
  const auto a = hwk_run({"evaluate", "--pred", p("pred.tsv"), "--gold", p("gold.tsv"), "--positive-only"});
  EXPECT_NE(a.out.find("f1=1.000000"), std::string::npos);
  EXPECT_EQ(a.out.find("macro_f1"), std::string::npos);
}

TEST_F(CliTest, PredictExplainAuditPreprocess) {
  ASSERT_EQ(hwk_run({"train", "--config", p("desk.cfg"), "--train", p("train.tsv"), "--out", p("run")}).code, 0);
  auto r = hwk_run({"predict", "--run", p("run"), "--input", p("test.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("id\tHS\tTR\tAG\nte0\t", 0), 0u);
  r = hwk_run({"explain", "--run", p("run"), "--input", p("test.tsv"), "--id", "te1", "--samples", "200", "--out",
               p("ex")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "ex" / "explanation_te1.svg"));
  r = hwk_run({"audit", "--train", p("train.tsv"), "--test", p("test.tsv"), "--min-support", "5", "--out", p("au")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "au" / "discrepancy.csv").rfind("pattern,train_rate,test_rate,delta", 0), 0u);
  r = hwk_run({"preprocess", "--input", p("test.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("id\ttokens\thashtags\tmentions\n", 0), 0u);
}

TEST_F(CliTest, ErrorsAreMachineReadable) {
  auto r = hwk_run({"train", "--train", p("missing.tsv")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error: code=IoError message=\"", 0), 0u) << r.err;
  hwk::cli::write_file(dir_ / "bad.cfg", "linear.C = 1\nlinear.epochs = many\n");
  r = hwk_run({"train", "--config", p("bad.cfg"), "--train", p("train.tsv"), "--out", p("bad")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("code=ConfigError"), std::string::npos);
  EXPECT_NE(r.err.find("bad.cfg:2"), std::string::npos) << r.err;
  r = hwk_run({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("code=InvalidArgument"), std::string::npos);
  EXPECT_EQ(hwk_run({"--help"}).code, 0);
}
