// SPDX-License-Identifier: Apache-2.0
// Spanish Snowball stemmer, current published revision.
#include <array>
#include <string>

#include "snowball.hpp"

namespace hwk::detail {
namespace {

using snowball::Rule;
using snowball::ends_with_at;
using snowball::in_set;
using snowball::longest_suffix;

constexpr std::u32string_view kVowels = U"aeiouáéíóúü";

constexpr std::array<Rule, 13> kPronouns{{
    {U"la", 0}, {U"sela", 0}, {U"le", 0}, {U"me", 0}, {U"se", 0}, {U"lo", 0}, {U"selo", 0},
    {U"las", 0}, {U"selas", 0}, {U"les", 0}, {U"los", 0}, {U"selos", 0}, {U"nos", 0},
}};

// Verb endings a pronoun may attach to.
constexpr std::array<Rule, 11> kPronounHosts{{
    {U"ando", 6}, {U"iendo", 6}, {U"yendo", 7}, {U"ándo", 2}, {U"iéndo", 1}, {U"ar", 6},
    {U"er", 6},   {U"ir", 6},    {U"ár", 3},    {U"ér", 4},   {U"ír", 5},
}};

constexpr std::array<Rule, 48> kStandard{{
    {U"ica", 1},     {U"ancia", 2},   {U"encia", 5},    {U"adora", 2},    {U"osa", 1},
    {U"ista", 1},    {U"iva", 9},     {U"anza", 1},     {U"logía", 3},    {U"idad", 8},
    {U"able", 1},    {U"ible", 1},    {U"ante", 2},     {U"mente", 7},    {U"amente", 6},
    {U"acion", 2},   {U"ucion", 4},   {U"ación", 2},    {U"ución", 4},    {U"ico", 1},
    {U"ismo", 1},    {U"oso", 1},     {U"amiento", 1},  {U"imiento", 1},  {U"ivo", 9},
    {U"ador", 2},    {U"icas", 1},    {U"ancias", 2},   {U"encias", 5},   {U"adoras", 2},
    {U"osas", 1},    {U"istas", 1},   {U"ivas", 9},     {U"anzas", 1},    {U"logías", 3},
    {U"idades", 8},  {U"ables", 1},   {U"ibles", 1},    {U"aciones", 2},  {U"uciones", 4},
    {U"adores", 2},  {U"antes", 2},   {U"icos", 1},     {U"ismos", 1},    {U"osos", 1},
    {U"amientos", 1}, {U"imientos", 1}, {U"ivos", 9},
}};

constexpr std::array<Rule, 12> kYVerb{{
    {U"ya", 0}, {U"ye", 0}, {U"yan", 0}, {U"yen", 0}, {U"yeron", 0}, {U"yendo", 0},
    {U"yo", 0}, {U"yas", 0}, {U"yes", 0}, {U"yais", 0}, {U"yamos", 0}, {U"yó", 0},
}};

constexpr std::array<Rule, 96> kVerb{{
    {U"aba", 2},    {U"ada", 2},     {U"ida", 2},     {U"ara", 2},     {U"iera", 2},
    {U"ía", 2},     {U"aría", 2},    {U"ería", 2},    {U"iría", 2},    {U"ad", 2},
    {U"ed", 2},     {U"id", 2},      {U"ase", 2},     {U"iese", 2},    {U"aste", 2},
    {U"iste", 2},   {U"an", 2},      {U"aban", 2},    {U"aran", 2},    {U"ieran", 2},
    {U"ían", 2},    {U"arían", 2},   {U"erían", 2},   {U"irían", 2},   {U"en", 1},
    {U"asen", 2},   {U"iesen", 2},   {U"aron", 2},    {U"ieron", 2},   {U"arán", 2},
    {U"erán", 2},   {U"irán", 2},    {U"ado", 2},     {U"ido", 2},     {U"ando", 2},
    {U"iendo", 2},  {U"ar", 2},      {U"er", 2},      {U"ir", 2},      {U"as", 2},
    {U"abas", 2},   {U"adas", 2},    {U"idas", 2},    {U"aras", 2},    {U"ieras", 2},
    {U"ías", 2},    {U"arías", 2},   {U"erías", 2},   {U"irías", 2},   {U"es", 1},
    {U"ases", 2},   {U"ieses", 2},   {U"abais", 2},   {U"arais", 2},   {U"ierais", 2},
    {U"íais", 2},   {U"aríais", 2},  {U"eríais", 2},  {U"iríais", 2},  {U"aseis", 2},
    {U"ieseis", 2}, {U"asteis", 2},  {U"isteis", 2},  {U"áis", 2},     {U"éis", 1},
    {U"aréis", 2},  {U"eréis", 2},   {U"iréis", 2},   {U"ados", 2},    {U"idos", 2},
    {U"amos", 2},   {U"ábamos", 2},  {U"áramos", 2},  {U"iéramos", 2}, {U"íamos", 2},
    {U"aríamos", 2}, {U"eríamos", 2}, {U"iríamos", 2}, {U"emos", 1},    {U"aremos", 2},
    {U"eremos", 2}, {U"iremos", 2},  {U"ásemos", 2},  {U"iésemos", 2}, {U"imos", 2},
    {U"arás", 2},   {U"erás", 2},    {U"irás", 2},    {U"ís", 2},      {U"ará", 2},
    {U"erá", 2},    {U"irá", 2},     {U"aré", 2},     {U"eré", 2},     {U"iré", 2},
    {U"ió", 2},
}};

constexpr std::array<Rule, 8> kResidual{{
    {U"a", 1}, {U"e", 2}, {U"o", 1}, {U"os", 1}, {U"á", 1}, {U"é", 2}, {U"í", 1}, {U"ó", 1},
}};

class SpanishStemmer {
 public:
  explicit SpanishStemmer(std::u32string word) : w_(std::move(word)) {}

  std::u32string run() {
    mark_regions();
    attached_pronoun();
    if (!standard_suffix() && !y_verb_suffix()) verb_suffix();
    residual_suffix();
    for (auto& c : w_) {
      switch (c) {
        case U'á': c = U'a'; break;
        case U'é': c = U'e'; break;
        case U'í': c = U'i'; break;
        case U'ó': c = U'o'; break;
        case U'ú': c = U'u'; break;
        default: break;
      }
    }
    return w_;
  }

 private:
  bool vowel(std::size_t i) const { return in_set(w_[i], kVowels); }
  std::size_t size() const { return w_.size(); }
  bool in_rv(std::size_t i) const { return i >= pv_; }
  bool in_r1(std::size_t i) const { return i >= p1_; }
  bool in_r2(std::size_t i) const { return i >= p2_; }
  bool preceded_by(std::size_t pos, std::u32string_view s) const { return ends_with_at(w_, pos, s); }

  void mark_regions() {
    const std::size_t n = size();
    pv_ = n;
    if (n >= 2) {
      std::size_t i = 2;
      if (vowel(0) && !vowel(1)) {
        // Region after the next vowel.
        while (i < n && !vowel(i)) ++i;
        if (i < n) pv_ = i + 1;
      } else if (vowel(0) && vowel(1)) {
        // Region after the next consonant.
        while (i < n && vowel(i)) ++i;
        if (i < n) pv_ = i + 1;
      } else if (!vowel(0) && !vowel(1)) {
        while (i < n && !vowel(i)) ++i;
        if (i < n) pv_ = i + 1;
      } else if (n >= 3) {
        pv_ = 3;
      }
    }
    p1_ = snowball::region_after(w_, 0, kVowels);
    p2_ = snowball::region_after(w_, p1_, kVowels);
  }

  void attached_pronoun() {
    const auto pronoun = longest_suffix(w_, kPronouns, size());
    if (!pronoun) return;
    const auto host = longest_suffix(w_, kPronounHosts, pronoun->start);
    if (!host || !in_rv(host->start)) return;
    const std::size_t h = host->start;
    switch (host->action) {
      case 1: w_.replace(h, std::u32string::npos, U"iendo"); break;
      case 2: w_.replace(h, std::u32string::npos, U"ando"); break;
      case 3: w_.replace(h, std::u32string::npos, U"ar"); break;
      case 4: w_.replace(h, std::u32string::npos, U"er"); break;
      case 5: w_.replace(h, std::u32string::npos, U"ir"); break;
      case 6: w_.erase(pronoun->start); break;
      case 7:
        if (h >= 1 && w_[h - 1] == U'u') w_.erase(pronoun->start);
        break;
      default: break;
    }
  }

  // Deletes `suffix` ending at the current end if it starts in R2.
  void strip_r2(std::u32string_view suffix) {
    if (preceded_by(size(), suffix) && in_r2(size() - suffix.size())) w_.erase(size() - suffix.size());
  }

  bool standard_suffix() {
    const auto m = longest_suffix(w_, kStandard, size());
    if (!m) return false;
    const std::size_t s = m->start;
    switch (m->action) {
      case 1:
        if (!in_r2(s)) return false;
        w_.erase(s);
        return true;
      case 2:
        if (!in_r2(s)) return false;
        w_.erase(s);
        strip_r2(U"ic");
        return true;
      case 3:
        if (!in_r2(s)) return false;
        w_.replace(s, std::u32string::npos, U"log");
        return true;
      case 4:
        if (!in_r2(s)) return false;
        w_.replace(s, std::u32string::npos, U"u");
        return true;
      case 5:
        if (!in_r2(s)) return false;
        w_.replace(s, std::u32string::npos, U"ente");
        return true;
      case 6: {
        if (!in_r1(s)) return false;
        w_.erase(s);
        static constexpr std::array<Rule, 4> follow{{{U"ic", 0}, {U"ad", 0}, {U"os", 0}, {U"iv", 1}}};
        const auto f = longest_suffix(w_, follow, size());
        if (f && in_r2(f->start)) {
          w_.erase(f->start);
          if (f->action == 1) strip_r2(U"at");
        }
        return true;
      }
      case 7: {
        if (!in_r2(s)) return false;
        w_.erase(s);
        static constexpr std::array<Rule, 3> follow{{{U"able", 0}, {U"ible", 0}, {U"ante", 0}}};
        const auto f = longest_suffix(w_, follow, size());
        if (f && in_r2(f->start)) w_.erase(f->start);
        return true;
      }
      case 8: {
        if (!in_r2(s)) return false;
        w_.erase(s);
        static constexpr std::array<Rule, 3> follow{{{U"ic", 0}, {U"abil", 0}, {U"iv", 0}}};
        const auto f = longest_suffix(w_, follow, size());
        if (f && in_r2(f->start)) w_.erase(f->start);
        return true;
      }
      case 9:
        if (!in_r2(s)) return false;
        w_.erase(s);
        strip_r2(U"at");
        return true;
      default: return false;
    }
  }

  bool y_verb_suffix() {
    const auto m = longest_suffix(w_, kYVerb, size(), pv_);
    if (!m) return false;
    if (m->start < 1 || w_[m->start - 1] != U'u') return false;
    w_.erase(m->start);
    return true;
  }

  bool verb_suffix() {
    const auto m = longest_suffix(w_, kVerb, size(), pv_);
    if (!m) return false;
    std::size_t cut = m->start;
    if (m->action == 1 && preceded_by(cut, U"gu")) --cut;
    w_.erase(cut);
    return true;
  }

  void residual_suffix() {
    const auto m = longest_suffix(w_, kResidual, size());
    if (!m || !in_rv(m->start)) return;
    w_.erase(m->start);
    if (m->action == 2 && preceded_by(size(), U"gu") && in_rv(size() - 1)) w_.pop_back();
  }

  std::u32string w_;
  std::size_t pv_ = 0;
  std::size_t p1_ = 0;
  std::size_t p2_ = 0;
};

}  // namespace

std::u32string stem_spanish(std::u32string word) { return SpanishStemmer(std::move(word)).run(); }

}  // namespace hwk::detail
