// SPDX-License-Identifier: Apache-2.0
#include "hwk/features/sentiment.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_set>

#include "hwk/error.hpp"
#include "hwk/unicode.hpp"

namespace hwk {

namespace detail {
std::string_view builtin_lexicon(Lang lang);
}

namespace {

// Stopwords in both surface and stemmed form, since the scorer sees stems.
const std::unordered_set<std::string>& ignorable(Lang lang) {
  static std::once_flag once;
  static std::unordered_set<std::string> sets[2];
  std::call_once(once, [] {
    for (Lang l : {Lang::EN, Lang::ES}) {
      auto& set = sets[static_cast<int>(l)];
      for (const auto& w : stopwords(l)) {
        set.insert(w);
        set.insert(stem(w, l));
      }
    }
  });
  return sets[static_cast<int>(lang)];
}

}  // namespace

void SentimentLexicon::add(std::string token, double valence) {
  if (!std::isfinite(valence) || valence < -4.0 || valence > 4.0)
    throw Error(Errc::InvalidArgument, fmt::format("valence {} for '{}' outside [-4, 4]", valence, token));
  valence_[unicode::to_lower(std::string_view(token))] = valence;
}

std::optional<double> SentimentLexicon::valence(std::string_view token) const {
  const auto it = valence_.find(std::string(token));
  if (it == valence_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::ignores(std::string_view token) const {
  return ignorable(lang_).contains(std::string(token));
}

SentimentLexicon SentimentLexicon::stemmed() const {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& [tok, v] : valence_) {
    auto& slot = acc[stemmed_ ? tok : stem(tok, lang_)];
    slot.first += v;
    slot.second += 1;
  }
  SentimentLexicon out(lang_);
  out.stemmed_ = true;
  for (const auto& [tok, sum] : acc) out.valence_[tok] = sum.first / sum.second;
  return out;
}

SentimentLexicon SentimentLexicon::from_entries(Lang lang, std::unordered_map<std::string, double> entries,
                                                bool stemmed) {
  SentimentLexicon out(lang);
  for (auto& [k, v] : entries) out.add(k, v);
  out.stemmed_ = stemmed;
  return out;
}

SentimentLexicon SentimentLexicon::parse(std::string_view text, Lang lang, std::string_view source) {
  SentimentLexicon lex(lang);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw Error(Errc::FormatError, fmt::format("{}:{}: expected token<TAB>valence", source, lineno));
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(Errc::FormatError, fmt::format("{}:{}: bad valence", source, lineno));
    }
    try {
      lex.add(line.substr(0, tab), v);
    } catch (const Error& e) {
      throw Error(Errc::FormatError, fmt::format("{}:{}: {}", source, lineno, e.what()));
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path, Lang lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), lang, path.string());
}

SentimentLexicon default_lexicon(Lang lang) {
  return SentimentLexicon::parse(detail::builtin_lexicon(lang), lang,
                                 lang == Lang::EN ? "lexicon_en.tsv" : "lexicon_es.tsv");
}

SentimentScores sentiment_scores(const TokenSequence& tokens, const SentimentLexicon& lex) {
  double pos = 0, neg = 0, neu = 0;
  for (const auto& t : tokens.tokens) {
    if (lex.ignores(t)) continue;
    const auto v = lex.valence(t);
    if (!v) neu += 1.0;
    else if (*v > 0) pos += *v;
    else if (*v < 0) neg += -*v;
  }
  const double total = pos + neg + neu;
  if (total <= 0) return {0.0, 0.0, 1.0};
  return {pos / total, neg / total, neu / total};
}

}  // namespace hwk
