// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "hwk/error.hpp"
#include "hwk/random.hpp"
#include "hwk/textprep.hpp"
#include "hwk/unicode.hpp"

using hwk::CleanConfig;

TEST(Clean, Basics) {
  CleanConfig cfg;
  EXPECT_EQ(hwk::clean("", cfg), "");
  EXPECT_EQ(hwk::clean("bitch https co uyipjkgx", cfg), "bitch https co uyipjkgx");
  EXPECT_EQ(hwk::clean("see https://t.co/xyz now", cfg), "see now");
  EXPECT_EQ(hwk::clean("Hello, World!!", cfg), "hello world");
  cfg.collapse_repeats = 2;
  EXPECT_EQ(hwk::clean("yaaaayyyyy", cfg), "yaayy");
}

TEST(Clean, TagsAndEmoji) {
  CleanConfig cfg;
  EXPECT_EQ(hwk::clean("go #BuildThatWall @user!", cfg), "go #buildthatwall @user");
  cfg.keep_hashtag_body = false;
  EXPECT_EQ(hwk::clean("go #BuildThatWall @user!", cfg), "go @user");
  cfg = {};
  EXPECT_EQ(hwk::clean("ok\xF0\x9F\x98\x82great", cfg), "ok \xF0\x9F\x98\x82 great");
}

TEST(Clean, ControlCharacters) {
  CleanConfig cfg;
  EXPECT_EQ(hwk::clean("a\tb\x01" "c\nd", cfg), "a bc d");
}

TEST(Clean, RejectsShortRun) {
  CleanConfig cfg;
  cfg.collapse_repeats = 1;
  EXPECT_THROW(hwk::clean("x", cfg), hwk::Error);
}

namespace {

std::string random_text(hwk::Rng& rng) {
  static const char32_t pool[] = {U'a', U'B', U'z', U' ', U'\t', U'#', U'@', U'!', U'.', U':',
                                  U'/', U'h', U't', U'p', U's', U'ñ', U'É', U'¿', U'’',
                                  U'\U0001F602', U'\u0007', U'_', U'1', U'　', U'́'};
  std::u32string s;
  const auto n = rng.below(40);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (rng.bernoulli(0.05)) {
      s += U"http://";
      continue;
    }
    s.push_back(pool[rng.below(std::size(pool))]);
  }
  return hwk::unicode::encode(s);
}

}  // namespace

TEST(Clean, IdempotentProperty) {
  hwk::Rng rng(11);
  for (int trial = 0; trial < 3000; ++trial) {
    CleanConfig cfg;
    cfg.lowercase = rng.bernoulli(0.5);
    cfg.strip_urls = rng.bernoulli(0.5);
    cfg.strip_punctuation = rng.bernoulli(0.5);
    cfg.keep_hashtag_body = rng.bernoulli(0.5);
    cfg.keep_mention_body = rng.bernoulli(0.5);
    if (rng.bernoulli(0.8)) cfg.collapse_repeats = 2 + static_cast<int>(rng.below(3));
    else cfg.collapse_repeats.reset();
    const auto text = random_text(rng);
    const auto once = hwk::clean(text, cfg);
    ASSERT_EQ(hwk::clean(once, cfg), once) << text;
    for (const auto& tok : hwk::tokenize(once)) ASSERT_FALSE(tok.empty());
  }
}

TEST(Tokenize, Examples) {
  using V = std::vector<std::string>;
  EXPECT_EQ(hwk::tokenize("build the wall"), (V{"build", "the", "wall"}));
  EXPECT_EQ(hwk::tokenize("   "), V{});
  EXPECT_EQ(hwk::tokenize("a  b"), (V{"a", "b"}));
}

TEST(Preprocess, HashtagsKept) {
  hwk::Tweet t{"1", "Women are stupid #WOMENSUCK", hwk::Lang::EN, std::nullopt};
  const auto seq = hwk::preprocess(t, {});
  EXPECT_EQ(seq.source_id, "1");
  EXPECT_EQ(seq.tokens, (std::vector<std::string>{"women", "are", "stupid", "womensuck"}));
  EXPECT_EQ(seq.kept_hashtags, std::vector<std::string>{"#womensuck"});

  hwk::Tweet b{"2", "#BuildThatWall now @POTUS", hwk::Lang::EN, std::nullopt};
  const auto s2 = hwk::preprocess(b, {});
  EXPECT_EQ(s2.kept_hashtags, std::vector<std::string>{"#buildthatwall"});
  EXPECT_EQ(s2.kept_mentions, std::vector<std::string>{"@potus"});
}

TEST(Preprocess, EmptyAfterClean) {
  hwk::Tweet t{"3", "!!! ... ???", hwk::Lang::ES, std::nullopt};
  EXPECT_TRUE(hwk::preprocess(t, {}).tokens.empty());
}

TEST(Preprocess, StopwordFlag) {
  CleanConfig cfg;
  cfg.remove_stopwords = true;
  hwk::Tweet t{"4", "build the wall", hwk::Lang::EN, std::nullopt};
  EXPECT_EQ(hwk::preprocess(t, cfg).tokens, (std::vector<std::string>{"build", "wall"}));
}
