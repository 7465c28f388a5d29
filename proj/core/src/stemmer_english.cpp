// SPDX-License-Identifier: Apache-2.0
// English (Porter2) Snowball stemmer, current published revision.
#include <array>
#include <string>

#include "snowball.hpp"

namespace hwk::detail {
namespace {

using snowball::Rule;
using snowball::in_set;
using snowball::longest_suffix;

constexpr std::u32string_view kVowels = U"aeiouy";
constexpr std::u32string_view kNonShortEnd = U"aeiouywxY";
constexpr std::u32string_view kValidLi = U"cdeghkmnrt";

struct Exception {
  std::u32string_view word;
  std::u32string_view stem;
};

constexpr std::array<Exception, 15> kExceptions{{
    {U"andes", U"andes"},   {U"atlas", U"atlas"}, {U"bias", U"bias"},
    {U"cosmos", U"cosmos"}, {U"early", U"earli"}, {U"gently", U"gentl"},
    {U"howe", U"howe"},     {U"idly", U"idl"},    {U"news", U"news"},
    {U"only", U"onli"},     {U"singly", U"singl"}, {U"skies", U"sky"},
    {U"skis", U"ski"},      {U"sky", U"sky"},     {U"ugly", U"ugli"},
}};

constexpr std::array<std::u32string_view, 9> kRegionPrefixes{
    U"arsen", U"commun", U"emerg", U"gener", U"inter", U"later", U"organ", U"past", U"univers"};

class EnglishStemmer {
 public:
  explicit EnglishStemmer(std::u32string word) : w_(std::move(word)) {}

  std::u32string run() {
    for (const auto& e : kExceptions)
      if (w_ == e.word) return std::u32string(e.stem);
    if (w_.size() < 3) return w_;

    prelude();
    mark_regions();
    step_1a();
    step_1b();
    step_1c();
    step_2();
    step_3();
    step_4();
    step_5();
    if (y_found_)
      for (auto& c : w_)
        if (c == U'Y') c = U'y';
    return w_;
  }

 private:
  bool vowel(std::size_t i) const { return in_set(w_[i], kVowels); }
  bool in_r1(std::size_t i) const { return i >= p1_; }
  bool in_r2(std::size_t i) const { return i >= p2_; }
  std::size_t size() const { return w_.size(); }
  void replace_tail(std::size_t start, std::u32string_view with) {
    w_.replace(start, w_.size() - start, with);
  }
  bool ends(std::u32string_view s) const { return snowball::ends_with_at(w_, w_.size(), s); }

  // Any vowel strictly before index `end`.
  bool has_vowel_before(std::size_t end) const {
    for (std::size_t i = 0; i < end; ++i)
      if (vowel(i)) return true;
    return false;
  }

  // Short syllable ending at index `end`.
  bool short_syllable(std::size_t end) const {
    if (end >= 3 && !in_set(w_[end - 1], kNonShortEnd) && vowel(end - 2) && !vowel(end - 3))
      return true;
    if (end == 2 && !vowel(1) && vowel(0)) return true;
    return end >= 4 && std::u32string_view(w_).substr(end - 4, 4) == U"past";
  }

  void prelude() {
    if (w_.front() == U'\'') w_.erase(0, 1);
    if (w_.empty()) return;
    if (w_.front() == U'y') {
      w_.front() = U'Y';
      y_found_ = true;
    }
    for (std::size_t i = 1; i < w_.size(); ++i) {
      if (w_[i] == U'y' && vowel(i - 1)) {
        w_[i] = U'Y';
        y_found_ = true;
      }
    }
  }

  void mark_regions() {
    p1_ = p2_ = size();
    std::size_t start = 0;
    bool prefixed = false;
    for (auto prefix : kRegionPrefixes) {
      if (std::u32string_view(w_).starts_with(prefix)) {
        start = prefix.size();
        prefixed = true;
        break;
      }
    }
    p1_ = prefixed ? start : snowball::region_after(w_, 0, kVowels);
    p2_ = snowball::region_after(w_, p1_, kVowels);
  }

  void step_1a() {
    static constexpr std::array<Rule, 3> apostrophes{{{U"'s'", 0}, {U"'s", 0}, {U"'", 0}}};
    if (auto m = longest_suffix(w_, apostrophes, size())) w_.erase(m->start);

    static constexpr std::array<Rule, 6> rules{{
        {U"sses", 1}, {U"ied", 2}, {U"ies", 2}, {U"s", 3}, {U"ss", 0}, {U"us", 0}}};
    auto m = longest_suffix(w_, rules, size());
    if (!m) return;
    switch (m->action) {
      case 1: replace_tail(m->start, U"ss"); break;
      case 2: replace_tail(m->start, m->start >= 2 ? U"i" : U"ie"); break;
      case 3:
        // Delete if a vowel occurs before the letter preceding the s.
        if (m->start >= 1 && has_vowel_before(m->start - 1)) w_.erase(m->start);
        break;
      default: break;
    }
  }

  void step_1b() {
    static constexpr std::array<Rule, 6> rules{{
        {U"eed", 1}, {U"eedly", 1}, {U"ed", 2}, {U"edly", 2}, {U"ingly", 2}, {U"ing", 3}}};
    const auto m = longest_suffix(w_, rules, size());
    if (!m) return;
    const std::size_t s = m->start;

    if (m->action == 1) {
      if (!in_r1(s)) return;
      const std::u32string_view head(w_.data(), s);
      if (head == U"succ" || head == U"proc" || head == U"exc") return;
      replace_tail(s, U"ee");
      return;
    }
    if (m->action == 3) {
      const std::u32string_view head(w_.data(), s);
      // "dying" -> "die": consonant + y + ing as the whole word.
      if (s == 2 && w_[1] == U'y' && !vowel(0)) {
        replace_tail(1, U"ie");
        return;
      }
      if (head == U"even" || head == U"cann" || head == U"inn" || head == U"earr" ||
          head == U"herr" || head == U"out")
        return;
    }

    if (!has_vowel_before(s)) return;
    w_.erase(s);

    if (ends(U"at") || ends(U"bl") || ends(U"iz")) {
      w_ += U'e';
      return;
    }
    static constexpr std::u32string_view doubles[] = {U"bb", U"dd", U"ff", U"gg", U"mm",
                                                      U"nn", U"pp", U"rr", U"tt"};
    for (auto d : doubles) {
      if (ends(d)) {
        if (size() == 3 && in_set(w_[0], U"aeo")) return;
        w_.pop_back();
        return;
      }
    }
    if (size() == p1_ && short_syllable(size())) w_ += U'e';
  }

  void step_1c() {
    const std::size_t n = size();
    if (n < 3) return;
    const char32_t last = w_[n - 1];
    if ((last == U'y' || last == U'Y') && !vowel(n - 2)) w_[n - 1] = U'i';
  }

  void step_2() {
    static constexpr std::array<Rule, 25> rules{{
        {U"anci", 3},    {U"enci", 2},    {U"ogi", 14},     {U"li", 16},     {U"bli", 12},
        {U"abli", 4},    {U"alli", 8},    {U"fulli", 9},    {U"lessli", 15}, {U"ousli", 10},
        {U"entli", 5},   {U"aliti", 8},   {U"biliti", 12},  {U"iviti", 11},  {U"tional", 1},
        {U"ational", 7}, {U"alism", 8},   {U"ation", 7},    {U"ization", 6}, {U"izer", 6},
        {U"ator", 7},    {U"iveness", 11}, {U"fulness", 9}, {U"ousness", 10}, {U"ogist", 13},
    }};
    const auto m = longest_suffix(w_, rules, size());
    if (!m || !in_r1(m->start)) return;
    const std::size_t s = m->start;
    switch (m->action) {
      case 1: replace_tail(s, U"tion"); break;
      case 2: replace_tail(s, U"ence"); break;
      case 3: replace_tail(s, U"ance"); break;
      case 4: replace_tail(s, U"able"); break;
      case 5: replace_tail(s, U"ent"); break;
      case 6: replace_tail(s, U"ize"); break;
      case 7: replace_tail(s, U"ate"); break;
      case 8: replace_tail(s, U"al"); break;
      case 9: replace_tail(s, U"ful"); break;
      case 10: replace_tail(s, U"ous"); break;
      case 11: replace_tail(s, U"ive"); break;
      case 12: replace_tail(s, U"ble"); break;
      case 13: replace_tail(s, U"og"); break;
      case 14:
        if (s >= 1 && w_[s - 1] == U'l') replace_tail(s, U"og");
        break;
      case 15: replace_tail(s, U"less"); break;
      case 16:
        if (s >= 1 && in_set(w_[s - 1], kValidLi)) w_.erase(s);
        break;
      default: break;
    }
  }

  void step_3() {
    static constexpr std::array<Rule, 9> rules{{
        {U"icate", 4}, {U"ative", 6}, {U"alize", 3}, {U"iciti", 4}, {U"ical", 4},
        {U"tional", 1}, {U"ational", 2}, {U"ful", 5}, {U"ness", 5},
    }};
    const auto m = longest_suffix(w_, rules, size());
    if (!m || !in_r1(m->start)) return;
    const std::size_t s = m->start;
    switch (m->action) {
      case 1: replace_tail(s, U"tion"); break;
      case 2: replace_tail(s, U"ate"); break;
      case 3: replace_tail(s, U"al"); break;
      case 4: replace_tail(s, U"ic"); break;
      case 5: w_.erase(s); break;
      case 6:
        if (in_r2(s)) w_.erase(s);
        break;
      default: break;
    }
  }

  void step_4() {
    static constexpr std::array<Rule, 18> rules{{
        {U"ic", 1},   {U"ance", 1}, {U"ence", 1}, {U"able", 1}, {U"ible", 1}, {U"ate", 1},
        {U"ive", 1},  {U"ize", 1},  {U"iti", 1},  {U"al", 1},   {U"ism", 1},  {U"ion", 2},
        {U"er", 1},   {U"ous", 1},  {U"ant", 1},  {U"ent", 1},  {U"ment", 1}, {U"ement", 1},
    }};
    const auto m = longest_suffix(w_, rules, size());
    if (!m || !in_r2(m->start)) return;
    if (m->action == 2 && !(m->start >= 1 && (w_[m->start - 1] == U's' || w_[m->start - 1] == U't')))
      return;
    w_.erase(m->start);
  }

  void step_5() {
    const std::size_t n = size();
    if (n == 0) return;
    if (w_[n - 1] == U'e') {
      const std::size_t s = n - 1;
      if (in_r2(s) || (in_r1(s) && !short_syllable(s))) w_.erase(s);
    } else if (w_[n - 1] == U'l') {
      if (in_r2(n - 1) && n >= 2 && w_[n - 2] == U'l') w_.pop_back();
    }
  }

  std::u32string w_;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;
  bool y_found_ = false;
};

}  // namespace

std::u32string stem_english(std::u32string word) { return EnglishStemmer(std::move(word)).run(); }

}  // namespace hwk::detail
