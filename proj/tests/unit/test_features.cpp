// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "hwk/error.hpp"
#include "hwk/features/pipeline.hpp"
#include "hwk/random.hpp"
#include "oracles.hpp"

using namespace hwk;

namespace {

TokenSequence seq(std::vector<std::string> toks) {
  TokenSequence s;
  s.tokens = std::move(toks);
  return s;
}

Tweet tweet(std::string id, std::string text, Lang lang = Lang::EN) {
  return Tweet{std::move(id), std::move(text), lang, LabelSet{}};
}

}  // namespace

TEST(Tfidf, IdfOfHalfDocTerm) {
  const auto v = fit_tfidf({seq({"a", "b"}), seq({"a"})}, {1, 1}, 1);
  EXPECT_NEAR(v.idf(*v.index("b")), std::log(2.0), 1e-12);
  EXPECT_EQ(v.idf(*v.index("a")), 0.0);
}

TEST(Tfidf, MinDfFilters) {
  const auto v = fit_tfidf({seq({"a", "b"}), seq({"a", "c"})}, {1, 1}, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.term(0), "a");
}

TEST(Tfidf, HandTransform) {
  const auto v = fit_tfidf({seq({"a"}), seq({"z"})}, {1, 1}, 1);
  const auto x = transform_tfidf(seq({"a", "a", "b"}), v);
  ASSERT_EQ(x.nnz(), 1u);
  EXPECT_NEAR(x.entries[0].value, (2.0 / 3.0) * std::log(2.0), 1e-12);
  EXPECT_TRUE(transform_tfidf(seq({"q"}), v).empty());
}

TEST(Tfidf, EmptyCorpusThrows) {
  try {
    fit_tfidf({}, {1, 1}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyCorpus);
  }
}

TEST(Tfidf, OracleAndMonotonicity) {
  Rng rng(5);
  for (int round = 0; round < 10; ++round) {
    std::vector<std::vector<std::string>> docs;
    std::vector<TokenSequence> corpus;
    const auto n_docs = 1 + rng.below(50);
    for (std::uint64_t d = 0; d < n_docs; ++d) {
      std::vector<std::string> toks;
      const auto len = rng.below(31);
      for (std::uint64_t i = 0; i < len; ++i) toks.push_back(std::string(1, char('a' + rng.below(6))));
      docs.push_back(toks);
      corpus.push_back(seq(toks));
    }
    const int lo = 1 + static_cast<int>(rng.below(2)), hi = lo + static_cast<int>(rng.below(2));
    const auto vocab = fit_tfidf(corpus, {lo, hi}, 1);
    const auto df = oracle::document_frequency(docs, lo, hi);
    ASSERT_EQ(vocab.size(), df.size());
    std::map<std::string, double> idf;
    for (const auto& [t, c] : df) idf[t] = std::log(double(n_docs) / c);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      const auto want = oracle::tfidf(docs[i], idf, lo, hi);
      const auto got = transform_tfidf(corpus[i], vocab);
      ASSERT_EQ(got.nnz(), want.size());
      for (const auto& e : got.entries) EXPECT_NEAR(e.value, want.at(vocab.term(e.index)), 1e-9);
    }
    for (const auto& [t1, c1] : df)
      for (const auto& [t2, c2] : df)
        if (c1 < c2) ASSERT_GT(vocab.idf(*vocab.index(t1)), vocab.idf(*vocab.index(t2)));
  }
}

TEST(Tfidf, SerializeRoundTrip) {
  const auto v = fit_tfidf({seq({"x", "y", "z"}), seq({"x", "y"}), seq({"w"})}, {1, 2}, 1);
  const auto back = Vocabulary::parse(v.serialize());
  EXPECT_EQ(back.serialize(), v.serialize());
  EXPECT_EQ(back.checksum(), v.checksum());
  EXPECT_THROW(Vocabulary::parse("nope"), Error);
}

TEST(Syllables, Examples) {
  EXPECT_EQ(count_syllables("cat", Lang::EN), 1);
  EXPECT_EQ(count_syllables("immigrants", Lang::EN), 3);
  EXPECT_EQ(count_syllables("123", Lang::EN), 0);
  EXPECT_EQ(count_syllables("make", Lang::EN), 1);
  EXPECT_EQ(count_syllables("table", Lang::EN), 2);
  EXPECT_EQ(count_syllables("the", Lang::EN), 1);
  EXPECT_EQ(count_syllables("casa", Lang::ES), 2);
  EXPECT_EQ(count_syllables("poeta", Lang::ES), 3);
  EXPECT_EQ(count_syllables("ciudad", Lang::ES), 2);
  EXPECT_EQ(count_syllables("país", Lang::ES), 2);
  EXPECT_EQ(count_syllables("hoy", Lang::ES), 1);
}

TEST(Readability, CatSat) {
  const auto t = tweet("1", "The cat sat.");
  const auto toks = preprocess(t, {});
  const auto s = surface_stats(t, toks);
  EXPECT_EQ(s.word_count, 3);
  EXPECT_EQ(s.sentence_count, 1);
  EXPECT_EQ(s.syllable_count, 3);
  const auto r = readability(s);
  EXPECT_NEAR(r.fre, 119.19, 0.01);
  EXPECT_NEAR(r.fkgl, -2.62, 0.01);
}

TEST(Readability, RatioInvarianceAndMonotone) {
  SurfaceStats s;
  s.word_count = 7;
  s.sentence_count = 2;
  s.syllable_count = 11;
  auto d = s;
  d.word_count *= 2;
  d.sentence_count *= 2;
  d.syllable_count *= 2;
  EXPECT_NEAR(readability(s).fre, readability(d).fre, 1e-9);
  EXPECT_NEAR(readability(s).fkgl, readability(d).fkgl, 1e-9);
  double prev = readability(s).fre;
  for (int extra = 1; extra < 10; ++extra) {
    auto m = s;
    m.syllable_count += extra;
    EXPECT_LT(readability(m).fre, prev);
    prev = readability(m).fre;
  }
  SurfaceStats empty;
  empty.word_count = 0;
  EXPECT_THROW(readability(empty), Error);
}

TEST(Surface, Counts) {
  const auto t = tweet("1", "Hi #a #b @c");
  const auto s = surface_stats(t, preprocess(t, {}));
  EXPECT_EQ(s.hashtag_count, 2);
  EXPECT_EQ(s.mention_count, 1);
  EXPECT_EQ(s.capitals, 1);
  EXPECT_LE(s.unique_words, s.word_count);

  const auto e = tweet("2", "...");
  const auto se = surface_stats(e, preprocess(e, {}));
  EXPECT_EQ(se.word_count, 0);
  EXPECT_EQ(se.unique_words, 0);

  const auto d = tweet("3", "ab cd");
  EXPECT_NEAR(surface_stats(d, preprocess(d, {})).word_density, 0.4, 1e-12);
}

TEST(Sentiment, Shares) {
  SentimentLexicon lex(Lang::EN);
  lex.add("good", 2);
  lex.add("bad", -2);
  auto s = sentiment_scores(seq({"zzz", "qqq"}), lex);
  EXPECT_EQ(s.pos, 0);
  EXPECT_EQ(s.neg, 0);
  EXPECT_EQ(s.neu, 1);
  s = sentiment_scores(seq({"good", "bad"}), lex);
  EXPECT_DOUBLE_EQ(s.pos, 0.5);
  EXPECT_DOUBLE_EQ(s.neg, 0.5);
  EXPECT_DOUBLE_EQ(s.neu, 0.0);
}

TEST(Sentiment, SadTodayNegativeDominates) {
  SentimentLexicon lex(Lang::EN);
  lex.add("sad", -2.1);
  const auto t = tweet("1", "i am very sad today");
  const auto s = sentiment_scores(preprocess(t, {}), lex.stemmed());
  EXPECT_GT(s.neg, s.pos);
  EXPECT_GT(s.neg, s.neu);
}

TEST(Sentiment, RandomSharesSumToOne) {
  const auto lex = default_lexicon(Lang::EN).stemmed();
  ASSERT_GT(lex.size(), 50u);
  Rng rng(3);
  const std::vector<std::string> pool{"love", "hate", "the", "wall", "sad", "happi", "x", "kill"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> toks;
    for (std::uint64_t k = rng.below(12); k > 0; --k) toks.push_back(pool[rng.below(pool.size())]);
    const auto s = sentiment_scores(seq(toks), lex);
    EXPECT_NEAR(s.pos + s.neg + s.neu, 1.0, 1e-9);
    for (double v : {s.pos, s.neg, s.neu}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_THROW(SentimentLexicon::parse("bad\t9\n", Lang::EN), Error);
}

namespace {

Dataset small_corpus() {
  Dataset ds;
  ds.lang = Lang::EN;
  const char* texts[] = {"Build the wall now!", "build the wall #BuildTheWall", "I love my neighbours",
                         "women are stupid", "women are amazing. Truly.", "@user you are ugly",
                         "the wall is long", "love wins"};
  int i = 0;
  for (const char* t : texts) ds.tweets.push_back(tweet(std::to_string(i++), t));
  return ds;
}

}  // namespace

TEST(Pipeline, ShapeAndStandardization) {
  const auto ds = small_corpus();
  FeaturePipeline p;
  EXPECT_THROW(p.transform(ds.tweets[0]), Error);
  p.fit(ds);
  EXPECT_EQ(p.dim(), p.vocabulary().size() + 13);
  const auto X = p.transform(ds);
  for (const auto& x : X) EXPECT_EQ(x.dim(), p.dim());
  for (std::size_t j = 0; j < 13; ++j) {
    double m = 0;
    for (const auto& x : X) m += x.dense[j];
    EXPECT_NEAR(m / X.size(), 0.0, 1e-9);
  }
  auto clone = ds.tweets[3];
  clone.id = "test-copy";
  EXPECT_EQ(p.transform(clone), X[3]);
}

TEST(Pipeline, DroppingSlotsShrinksVector) {
  const auto ds = small_corpus();
  FeatureConfig cfg;
  FeaturePipeline full(cfg);
  full.fit(ds);
  cfg.drop = {"avg_syllable", "capitals", "word_vs_unique", "character_count", "word_unique_percentage"};
  FeaturePipeline reduced(cfg);
  reduced.fit(ds);
  EXPECT_EQ(full.dim() - reduced.dim(), 5u);
  cfg.drop = {"capitals"};
  FeaturePipeline one(cfg);
  one.fit(ds);
  EXPECT_EQ(full.dim() - one.dim(), 1u);
  cfg.drop = {"fre"};
  EXPECT_THROW(FeaturePipeline{cfg}, Error);
}

TEST(Pipeline, SentimentSlotsAndRoundTrip) {
  const auto ds = small_corpus();
  FeatureConfig cfg;
  cfg.sentiment = true;
  cfg.min_df = 1;
  FeaturePipeline p(cfg);
  p.fit(ds);
  EXPECT_EQ(p.dim(), p.vocabulary().size() + 16);
  const auto back = FeaturePipeline::parse(p.serialize());
  EXPECT_EQ(back.serialize(), p.serialize());
  for (const auto& t : ds.tweets) EXPECT_EQ(back.transform(t), p.transform(t));
}
