// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "hwk/analysis.hpp"
#include "hwk/error.hpp"
#include "hwk/random.hpp"
#include "hwk/svg.hpp"
#include "hwk/textprep.hpp"

using namespace hwk;

namespace {

Tweet make(std::string id, std::string text, bool hs) {
  Tweet t;
  t.id = std::move(id);
  t.text = std::move(text);
  t.labels = LabelSet{hs, false, false};
  return t;
}

/// `n` tweets containing `pattern`, the first `pos` of them hateful.
void plant(Dataset& ds, const std::string& pattern, int n, int pos) {
  for (int i = 0; i < n; ++i)
    ds.tweets.push_back(make(fmt::format("{}{}-{}", pattern, ds.tweets.size(), i),
                             fmt::format("some words {} more words", pattern), i < pos));
}

}  // namespace

TEST(HashtagStats, SharesFromCounts) {
  Dataset ds;
  for (int i = 0; i < 9; ++i) ds.tweets.push_back(make("a" + std::to_string(i), "#A wall", false));
  ds.tweets.push_back(make("b", "#b and #B", false));
  const auto t = hashtag_stats(ds, 10);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].tag, "#a");
  EXPECT_DOUBLE_EQ(t.rows[0].share, 9.0 / 11.0);
  EXPECT_EQ(t.tweets_with_multiple, 1u);
  EXPECT_LE(t.top_share(), 1.0 + 1e-12);
}

TEST(HashtagStats, NoHashtagsGivesEmptyTable) {
  Dataset ds;
  ds.tweets.push_back(make("x", "nothing here", true));
  EXPECT_TRUE(hashtag_stats(ds, 5).rows.empty());
}

TEST(HashtagStats, PermutationInvariant) {
  Dataset ds;
  Rng rng(3);
  for (int i = 0; i < 50; ++i)
    ds.tweets.push_back(make(std::to_string(i), fmt::format("#t{} #t{} x", rng.below(7), rng.below(3)), false));
  const auto a = hashtag_stats(ds, 5).csv();
  rng.shuffle(std::span<Tweet>(ds.tweets));
  EXPECT_EQ(hashtag_stats(ds, 5).csv(), a);
}

TEST(LabelRate, PlantedHashtagRate) {
  Dataset ds;
  plant(ds, "#BuildTheWall", 100, 98);
  plant(ds, "#other", 20, 3);
  const auto r = conditional_label_rate(ds, "#buildthewall");
  EXPECT_EQ(r.matches, 100u);
  EXPECT_DOUBLE_EQ(r.rate, 0.98);
  try {
    conditional_label_rate(ds, "#absent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoMatches);
  }
}

TEST(LabelRate, MatchesNaiveOracleOnFuzzedCorpora) {
  const std::vector<std::string> words{"bitch", "wall", "#wall", "#Bitch", "the", "BITCH"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Dataset ds;
    for (int i = 0; i < 60; ++i) {
      std::string text;
      for (int w = 0; w < 4; ++w) text += words[rng.below(words.size())] + " ";
      ds.tweets.push_back(make(std::to_string(i), text, rng.bernoulli(0.4)));
    }
    for (const std::string pattern : {"bitch", "#bitch", "wall"}) {
      std::size_t hits = 0, pos = 0;
      for (const auto& t : ds.tweets) {
        bool hit = false;
        if (pattern[0] == '#') {
          for (const auto& tag : extract_hashtags(t.text)) hit |= tag == pattern;
        } else {
          for (const auto& tok : surface_tokens(t.text)) hit |= tok == pattern;
        }
        hits += hit;
        pos += hit && t.labels->hs;
      }
      if (hits == 0) {
        EXPECT_THROW(conditional_label_rate(ds, pattern), Error);
        continue;
      }
      const auto r = conditional_label_rate(ds, pattern);
      EXPECT_EQ(r.matches, hits);
      EXPECT_EQ(r.positives, pos);
    }
  }
}

TEST(Discrepancy, DriftedTokenRanksFirst) {
  Dataset train, test;
  plant(train, "#buildthewall", 100, 98);
  plant(test, "#buildthewall", 100, 35);
  plant(train, "stable", 40, 20);
  plant(test, "stable", 40, 20);
  const auto rep = discrepancy_report(train, test, 20);
  ASSERT_FALSE(rep.rows.empty());
  EXPECT_EQ(rep.rows[0].pattern, "#buildthewall");
  EXPECT_NEAR(rep.rows[0].delta, 0.63, 1e-12);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_LE(rep.rows[i].delta, rep.rows[i - 1].delta);
  for (const auto& r : rep.rows) {
    EXPECT_GE(r.delta, 0.0);
    EXPECT_LE(r.delta, 1.0);
  }
  EXPECT_NE(rep.csv().find("#buildthewall,0.980000,0.350000,0.630000,100,100"), std::string::npos);
}

TEST(Discrepancy, IdenticalSplitsAndHighSupport) {
  Dataset train;
  plant(train, "bitch", 30, 20);
  const auto rep = discrepancy_report(train, train, 5);
  for (const auto& r : rep.rows) EXPECT_EQ(r.delta, 0.0);
  EXPECT_DOUBLE_EQ(rep.tag_likelihood_ratio, 0.0);
  EXPECT_TRUE(discrepancy_report(train, train, 31).rows.empty());
}

TEST(Discrepancy, TagLikelihoodRatio) {
  Dataset en, es;
  for (int i = 0; i < 10; ++i) en.tweets.push_back(make("e" + std::to_string(i), i < 5 ? "#x hi" : "hi", false));
  for (int i = 0; i < 10; ++i) es.tweets.push_back(make("s" + std::to_string(i), i < 2 ? "#y #z hola" : "hola", false));
  EXPECT_DOUBLE_EQ(hashtag_likelihood_ratio(en, es), 2.5);
  EXPECT_THROW(hashtag_likelihood_ratio(en, es, 3), Error);
}

TEST(Svg, ChartsAreWellFormedAndEscaped) {
  const auto bars = svg_bar_chart({{"<b>", 0.5}, {"x&y", -0.25}}, "weights");
  EXPECT_EQ(bars.rfind("<svg", 0), 0u);
  EXPECT_NE(bars.find("&lt;b&gt;"), std::string::npos);
  EXPECT_NE(bars.find("x&amp;y"), std::string::npos);
  EXPECT_NE(bars.find("</svg>"), std::string::npos);
  ConfusionMatrix cm{5, 2, 3, 10};
  const auto heat = svg_confusion(cm, "EN HS");
  for (const char* n : {">5<", ">2<", ">3<", ">10<"}) EXPECT_NE(heat.find(n), std::string::npos) << n;
}
