// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "hwk/error.hpp"
#include "hwk/neural.hpp"
#include "hwk/unicode.hpp"
#include "synthetic.hpp"

using namespace hwk;

namespace {

GruHyper tiny_gru(std::size_t vocab) {
  GruHyper h;
  h.vocab_size = vocab;
  h.seq_len = 12;
  h.embed_dim = 8;
  h.hidden = 4;
  h.dense = {6, 5};
  return h;
}

CnnHyper tiny_cnn() {
  CnnHyper h;
  h.max_len = 20;
  h.filters = 4;
  h.kernel = 2;
  h.pool = 2;
  h.dense = {8, 6};
  return h;
}

GruHyper desk_gru(std::size_t vocab) {
  GruHyper h;
  h.vocab_size = vocab;
  h.embed_dim = 16;
  h.hidden = 8;
  h.dense = {16, 8};
  return h;
}

CnnHyper desk_cnn() {
  CnnHyper h;
  h.filters = 8;
  h.dense = {32, 16};
  return h;
}

std::vector<int> hs_labels(const Dataset& ds) {
  std::vector<int> y;
  for (const auto& t : ds.tweets) y.push_back(t.labels->hs ? 1 : 0);
  return y;
}

BiGru gru_for(const Dataset& ds, GruHyper h, std::uint64_t seed) {
  std::vector<TokenSequence> docs;
  for (const auto& t : ds.tweets) docs.push_back(preprocess(t, {}));
  auto index = WordIndex::build(docs);
  h.vocab_size = index.size();
  return BiGru(h, std::move(index), {}, seed);
}

// Zero-initialized biases can put a relu exactly on its kink when every
// upstream unit is dead; gradients are checked at generic points instead.
void jitter_biases(ParamSet& ps, std::uint64_t seed) {
  Rng rng(seed);
  for (auto& [name, t] : ps.entries())
    if (name.ends_with(".b"))
      for (auto& v : t.data()) v = rng.normal() * 0.1;
}

double train_accuracy(const NeuralClassifier& m, const std::vector<NeuralInput>& x, const std::vector<int>& y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ok += m.predict(x[i]) == y[i];
  return double(ok) / double(x.size());
}

}  // namespace

TEST(CharQuantizer, AlphabetHasSeventyDistinctSymbols) {
  CharQuantizer q;
  EXPECT_EQ(q.alphabet_size(), 70u);
  std::set<char32_t> distinct(q.alphabet().begin(), q.alphabet().end());
  EXPECT_EQ(distinct.size(), 70u);
  EXPECT_FALSE(q.row(U' ').has_value());
  EXPECT_TRUE(q.row(U'\n').has_value());
}

TEST(CharQuantizer, BackwardOrderPlacesLastCharacterFirst) {
  CharQuantizer q;
  const auto m = q.quantize("ab");
  ASSERT_EQ(m.shape(), (ad::Shape{70, 140}));
  const std::size_t ra = *q.row(U'a'), rb = *q.row(U'b');
  double total = 0;
  for (double v : m.data()) total += v;
  EXPECT_EQ(total, 2.0);
  EXPECT_EQ(m[rb * 140 + 0], 1.0);
  EXPECT_EQ(m[ra * 140 + 1], 1.0);
}

TEST(CharQuantizer, EmptyTextIsAllZero) {
  CharQuantizer q;
  const auto m = q.quantize("");
  for (double v : m.data()) EXPECT_EQ(v, 0.0);
}

TEST(CharQuantizer, KeepsOnlyTheLatestWindow) {
  CharQuantizer q;
  std::string tail(140, 'z');
  const auto a = q.quantize(std::string(60, 'a') + tail);
  const auto b = q.quantize(std::string(60, 'q') + tail);
  EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
}

TEST(CharQuantizer, ColumnsAreOneHotOrZero) {
  CharQuantizer q;
  const std::string text = "Hello, World! ¿qué? 123 #tag @you ’x’";
  const auto m = q.quantize(text);
  std::size_t nonzero_cols = 0;
  for (std::size_t c = 0; c < 140; ++c) {
    double col = 0;
    for (std::size_t r = 0; r < 70; ++r) col += m[r * 140 + c];
    EXPECT_LE(col, 1.0);
    nonzero_cols += col > 0;
  }
  std::size_t expected = 0;
  for (char32_t c : unicode::decode_lossy(text)) expected += q.row(c).has_value();
  EXPECT_EQ(nonzero_cols, expected);
  EXPECT_EQ(q.row(U'H'), q.row(U'h'));
}

TEST(WordIndex, ReservesPadAndUnknownAndRanksByFrequency) {
  std::vector<TokenSequence> docs(2);
  docs[0].tokens = {"b", "a", "c", "a"};
  docs[1].tokens = {"c", "d"};
  const auto w = WordIndex::build(docs);
  EXPECT_EQ(w.size(), 6u);
  EXPECT_EQ(w.id("a"), 2u);
  EXPECT_EQ(w.id("c"), 3u);
  EXPECT_EQ(w.id("b"), 4u);
  EXPECT_EQ(w.id("zzz"), WordIndex::kUnknown);
  EXPECT_EQ(w.encode({"a", "zzz"}, 4), (std::vector<std::size_t>{2, 1, 0, 0}));
}

TEST(CharCnn, LengthTraceAtDefaults) {
  EXPECT_EQ(cnn_length_trace(CnnHyper{}), (std::vector<std::size_t>{134, 44, 38, 12, 6, 2}));
  CnnHyper bad;
  bad.max_len = 30;
  EXPECT_THROW(cnn_length_trace(bad), Error);
}

TEST(CharCnn, ZeroParametersGiveUniform) {
  CharCnn m(tiny_cnn(), 1);
  m.params().fill(0.0);
  NeuralInput in;
  in.chars = m.quantizer().quantize("anything at all");
  const auto p = m.predict_proba(in);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(CharCnn, RejectsWrongInputShape) {
  CharCnn m(tiny_cnn(), 1);
  NeuralInput in;
  in.chars = ad::Tensor::zeros({70, 21});
  EXPECT_THROW(m.predict_proba(in), Error);
}

TEST(BiGru, AllPadWithZeroParametersGivesUniform) {
  BiGru m(tiny_gru(10), WordIndex{}, {}, 3);
  m.params().fill(0.0);
  NeuralInput in;
  in.ids.assign(12, WordIndex::kPad);
  const auto p = m.predict_proba(in);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(BiGru, ProbabilitiesSumToOneAndRejectBadIds) {
  BiGru m(tiny_gru(10), WordIndex{}, {}, 3);
  NeuralInput in;
  in.ids = {2, 5, 9, 0, 0};
  const auto p = m.predict_proba(in);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
  in.ids = {10};
  EXPECT_THROW(m.predict_proba(in), Error);
  in.ids.assign(13, 2);
  EXPECT_THROW(m.predict_proba(in), Error);
}

TEST(BiGru, ReversalWithTiedDirectionsIsInvariant) {
  BiGru m(tiny_gru(10), WordIndex{}, {}, 11);
  auto& ps = m.params();
  for (const char* name : {".W", ".U_zr", ".U_n", ".b"}) {
    auto src = ps.get(std::string("fwd") + name).data();
    auto dst = ps.get(std::string("bwd") + name).data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
  auto w = ps.get("dense0.W").data();
  const std::size_t H = 4, out = 6;
  for (std::size_t i = 0; i < H; ++i)
    for (std::size_t j = 0; j < out; ++j) w[(H + i) * out + j] = w[i * out + j];
  NeuralInput a, b;
  a.ids = {2, 3, 7, 5, 9};
  b.ids = {9, 5, 7, 3, 2};
  const auto pa = m.predict_proba(a), pb = m.predict_proba(b);
  EXPECT_NEAR(pa[0], pb[0], 1e-14);
  EXPECT_NEAR(pa[1], pb[1], 1e-14);
}

TEST(NeuralGradcheck, TinyBiGru) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BiGru m(tiny_gru(9), WordIndex{}, {}, seed);
    jitter_biases(m.params(), seed);
    NeuralInput in;
    in.ids = {2, 8, 0, 4, 4, 1};
    const ad::Tensor target(ad::Shape{2}, {0.0, 1.0});
    const auto r = ad::gradcheck(
        [&](ad::Tape& tape) {
          Rng rng(seed + 100);
          return ad::cross_entropy(tape, m.forward(tape, in, rng, true), target);
        },
        m.params().tensors());
    EXPECT_GT(r.checked, 0u);
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << seed << " param " << r.worst_param << " index " << r.worst_index;
  }
}

TEST(NeuralGradcheck, TinyCharCnn) {
  for (std::uint64_t seed = 0; seed < 2; ++seed) {
    CharCnn m(tiny_cnn(), seed);
    jitter_biases(m.params(), seed);
    NeuralInput in;
    in.chars = m.quantizer().quantize("you are all vermin!!");
    const ad::Tensor target(ad::Shape{2}, {1.0, 0.0});
    const auto r = ad::gradcheck(
        [&](ad::Tape& tape) {
          Rng rng(seed + 100);
          return ad::cross_entropy(tape, m.forward(tape, in, rng, true), target);
        },
        m.params().tensors());
    EXPECT_LE(r.max_rel_error, 1e-4) << "seed " << seed << " param " << r.worst_param << " index " << r.worst_index;
  }
}

TEST(NeuralTraining, BiGruLearnsSeparableCorpus) {
  const auto ds = fixture::separable_corpus();
  auto m = gru_for(ds, desk_gru(0), 5);
  const auto x = encode_all(m, ds);
  const auto y = hs_labels(ds);
  NeuralTrainOptions opts;
  opts.epochs = 200;
  opts.seed = 5;
  opts.adam.lr = 5e-3;
  opts.target_val_macro_f1 = 1.0;
  const auto hist = train_classifier(m, x, y, x, y, opts);
  EXPECT_NEAR(hist.epochs.front().train_loss, std::log(2.0), 0.1);
  EXPECT_GE(train_accuracy(m, x, y), 0.95);
}

TEST(NeuralTraining, CharCnnLearnsSeparableCorpus) {
  const auto ds = fixture::separable_corpus();
  CharCnn m(desk_cnn(), 5);
  const auto x = encode_all(m, ds);
  const auto y = hs_labels(ds);
  NeuralTrainOptions opts;
  opts.epochs = 200;
  opts.seed = 5;
  opts.adam.lr = 5e-3;
  opts.target_val_macro_f1 = 1.0;
  const auto hist = train_classifier(m, x, y, x, y, opts);
  EXPECT_NEAR(hist.epochs.front().train_loss, std::log(2.0), 0.1);
  EXPECT_GE(train_accuracy(m, x, y), 0.95);
}

TEST(NeuralTraining, SameSeedGivesIdenticalHistory) {
  const auto ds = fixture::separable_corpus(32);
  auto run = [&] {
    auto m = gru_for(ds, desk_gru(0), 9);
    const auto x = encode_all(m, ds);
    const auto y = hs_labels(ds);
    NeuralTrainOptions opts;
    opts.epochs = 3;
    opts.seed = 9;
    return train_classifier(m, x, y, x, y, opts).csv();
  };
  EXPECT_EQ(run(), run());
}

TEST(NeuralTraining, RejectsEmptyValidation) {
  const auto ds = fixture::separable_corpus(8);
  CharCnn m(tiny_cnn(), 1);
  const auto x = encode_all(m, ds);
  EXPECT_THROW(train_classifier(m, x, hs_labels(ds), {}, {}, {}), Error);
}

TEST(Checkpoint, RoundTripPreservesPredictions) {
  const auto ds = fixture::separable_corpus(8);
  auto gru = gru_for(ds, tiny_gru(0), 2);
  CharCnn cnn(tiny_cnn(), 2);
  for (const NeuralClassifier* m : {static_cast<const NeuralClassifier*>(&gru), static_cast<const NeuralClassifier*>(&cnn)}) {
    const auto text = serialize_checkpoint(*m);
    const auto back = parse_checkpoint(text);
    EXPECT_EQ(back->kind(), m->kind());
    EXPECT_EQ(serialize_checkpoint(*back), text);
    for (const auto& t : ds.tweets) {
      const auto in = back->encode(t);
      EXPECT_EQ(back->predict_proba(in), m->predict_proba(m->encode(t)));
    }
  }
  EXPECT_THROW(parse_checkpoint("hwk-neural v1\nkind lstm\nhyper\n"), Error);
}

TEST(RepeatSeeds, ReportsMeanAndSampleStd) {
  const auto s = repeat_seeds([](std::uint64_t seed) { return double(seed); }, {1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-12);
}
