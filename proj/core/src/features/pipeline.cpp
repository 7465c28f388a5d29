// SPDX-License-Identifier: Apache-2.0
#include "hwk/features/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hwk/error.hpp"

namespace hwk {

namespace {

constexpr std::string_view kMagic = "hwk-pipeline v1";

bool slot_known(std::string_view name) {
  return std::find(kDroppableSlots.begin(), kDroppableSlots.end(), name) != kDroppableSlots.end();
}

}  // namespace

void FeatureConfig::validate() const {
  clean.validate();
  if (ngrams.min_n < 1 || ngrams.min_n > ngrams.max_n || ngrams.max_n > 5)
    throw Error(Errc::InvalidArgument,
                fmt::format("n-gram range ({}, {}) outside 1 <= min <= max <= 5", ngrams.min_n, ngrams.max_n));
  if (min_df < 1) throw Error(Errc::InvalidArgument, "min_df must be >= 1");
  for (const auto& d : drop)
    if (!slot_known(d)) throw Error(Errc::InvalidArgument, fmt::format("slot '{}' cannot be dropped", d));
}

std::vector<std::string> FeatureConfig::dense_names() const {
  std::vector<std::string> out;
  if (!dense) return out;
  for (auto name : kDenseSlots)
    if (!drop.contains(std::string(name))) out.emplace_back(name);
  if (sentiment)
    for (auto name : kSentimentSlots) out.emplace_back(name);
  return out;
}

std::vector<double> dense_features(const Tweet& tweet, const TokenSequence& tokens,
                                   const FeatureConfig& cfg, const SentimentLexicon* lex) {
  std::vector<double> out;
  if (!cfg.dense) return out;
  const auto s = surface_stats(tweet, tokens, cfg.clean);
  Readability r;
  if (s.word_count > 0) r = readability(s);
  const double words = std::max(1.0, s.word_count);
  const double values[] = {s.syllable_count,
                           s.syllable_count / words,
                           s.word_count,
                           s.char_count,
                           s.length,
                           s.capitals,
                           s.unique_words,
                           s.unique_words / words,
                           s.word_density,
                           s.hashtag_count,
                           s.mention_count,
                           r.fre,
                           r.fkgl};
  for (std::size_t i = 0; i < kDenseSlots.size(); ++i)
    if (!cfg.drop.contains(std::string(kDenseSlots[i]))) out.push_back(values[i]);
  if (cfg.sentiment) {
    if (!lex) throw Error(Errc::NotFitted, "sentiment slots need a lexicon");
    const auto sc = sentiment_scores(tokens, *lex);
    out.insert(out.end(), {sc.pos, sc.neg, sc.neu});
  }
  return out;
}

FeaturePipeline::FeaturePipeline(FeatureConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

void FeaturePipeline::fit(const Dataset& train, std::optional<SentimentLexicon> lexicon) {
  if (train.empty()) throw Error(Errc::EmptyCorpus, "cannot fit features on an empty split");
  lang_ = train.lang;
  lexicon_.reset();
  if (cfg_.sentiment) {
    auto lex = lexicon ? std::move(*lexicon) : default_lexicon(lang_);
    lexicon_ = lex.is_stemmed() ? std::move(lex) : lex.stemmed();
  }

  std::vector<TokenSequence> docs;
  docs.reserve(train.size());
  for (const auto& t : train.tweets) docs.push_back(preprocess(t, cfg_.clean));
  vocab_ = fit_tfidf(docs, cfg_.ngrams, cfg_.min_df);

  const auto names = cfg_.dense_names();
  mean_.assign(names.size(), 0.0);
  scale_.assign(names.size(), 1.0);
  if (cfg_.standardize && !names.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i)
      rows.push_back(dense_features(train.tweets[i], docs[i], cfg_, lexicon_ ? &*lexicon_ : nullptr));
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      double m = 0;
      for (const auto& r : rows) m += r[j];
      m /= n;
      double var = 0;
      for (const auto& r : rows) var += (r[j] - m) * (r[j] - m);
      const double sd = std::sqrt(var / n);
      mean_[j] = m;
      scale_[j] = sd > 1e-12 ? sd : 1.0;
    }
  }
  fitted_ = true;
}

std::size_t FeaturePipeline::dim() const { return vocab_.size() + mean_.size(); }

FeatureVector FeaturePipeline::transform(const Tweet& tweet) const {
  if (!fitted_) throw Error(Errc::NotFitted, "feature pipeline used before fit");
  const auto doc = preprocess(tweet, cfg_.clean);
  FeatureVector v;
  v.sparse = transform_tfidf(doc, vocab_);
  v.sparse_dim = vocab_.size();
  v.dense = dense_features(tweet, doc, cfg_, lexicon_ ? &*lexicon_ : nullptr);
  for (std::size_t j = 0; j < v.dense.size(); ++j) v.dense[j] = (v.dense[j] - mean_[j]) / scale_[j];
  return v;
}

std::vector<FeatureVector> FeaturePipeline::transform(const Dataset& ds) const {
  std::vector<FeatureVector> out;
  out.reserve(ds.size());
  for (const auto& t : ds.tweets) out.push_back(transform(t));
  return out;
}

std::string FeaturePipeline::column_name(std::size_t column) const {
  if (column < vocab_.size()) return vocab_.term(static_cast<std::uint32_t>(column));
  const auto names = cfg_.dense_names();
  const auto j = column - vocab_.size();
  if (j < names.size()) return "[" + names[j] + "]";
  throw Error(Errc::DimensionMismatch, fmt::format("column {} outside {} features", column, dim()));
}

std::string FeaturePipeline::serialize() const {
  if (!fitted_) throw Error(Errc::NotFitted, "cannot serialize an unfitted pipeline");
  std::string out(kMagic);
  out += '\n';
  const auto& c = cfg_.clean;
  out += fmt::format("lang\t{}\n", to_string(lang_));
  out += fmt::format("clean\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", int(c.lowercase), int(c.strip_urls),
                     int(c.strip_punctuation), int(c.keep_hashtag_body), int(c.keep_mention_body),
                     c.collapse_repeats.value_or(0), int(c.remove_stopwords));
  out += fmt::format("ngrams\t{}\t{}\nmin_df\t{}\n", cfg_.ngrams.min_n, cfg_.ngrams.max_n, cfg_.min_df);
  out += fmt::format("dense\t{}\t{}\t{}\n", int(cfg_.dense), int(cfg_.standardize), int(cfg_.sentiment));
  out += "drop";
  for (const auto& d : cfg_.drop) out += "\t" + d;
  out += "\nmean";
  for (double m : mean_) out += fmt::format("\t{:.17g}", m);
  out += "\nscale";
  for (double s : scale_) out += fmt::format("\t{:.17g}", s);
  out += '\n';
  std::vector<std::pair<std::string, double>> lex;
  if (lexicon_) lex.assign(lexicon_->entries().begin(), lexicon_->entries().end());
  std::sort(lex.begin(), lex.end());
  out += fmt::format("lexicon\t{}\n", lex.size());
  for (const auto& [k, v] : lex) out += fmt::format("{}\t{:.17g}\n", k, v);
  out += vocab_.serialize();
  return out;
}

FeaturePipeline FeaturePipeline::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](std::string_view why) {
    return Error(Errc::FormatError, fmt::format("pipeline line {}: {}", lineno, why));
  };
  auto next = [&](std::string_view key) {
    ++lineno;
    if (!std::getline(in, line)) throw fail("truncated");
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string item;
    while (std::getline(ls, item, '\t')) f.push_back(item);
    if (f.empty() || f[0] != key) throw fail(fmt::format("expected '{}'", key));
    f.erase(f.begin());
    return f;
  };
  auto num = [&](const std::string& s) {
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw fail(fmt::format("bad number '{}'", s));
    }
  };

  ++lineno;
  if (!std::getline(in, line) || line != kMagic) throw fail("missing header");
  FeatureConfig cfg;
  const auto lang_f = next("lang");
  const Lang lang = parse_lang(lang_f.at(0));
  const auto cl = next("clean");
  if (cl.size() != 7) throw fail("clean needs 7 fields");
  cfg.clean.lowercase = cl[0] == "1";
  cfg.clean.strip_urls = cl[1] == "1";
  cfg.clean.strip_punctuation = cl[2] == "1";
  cfg.clean.keep_hashtag_body = cl[3] == "1";
  cfg.clean.keep_mention_body = cl[4] == "1";
  const int rep = static_cast<int>(num(cl[5]));
  if (rep > 0) cfg.clean.collapse_repeats = rep;
  else cfg.clean.collapse_repeats.reset();
  cfg.clean.remove_stopwords = cl[6] == "1";
  const auto ng = next("ngrams");
  cfg.ngrams = {static_cast<int>(num(ng.at(0))), static_cast<int>(num(ng.at(1)))};
  cfg.min_df = static_cast<int>(num(next("min_df").at(0)));
  const auto de = next("dense");
  cfg.dense = de.at(0) == "1";
  cfg.standardize = de.at(1) == "1";
  cfg.sentiment = de.at(2) == "1";
  for (const auto& d : next("drop")) cfg.drop.insert(d);

  FeaturePipeline p(cfg);
  p.lang_ = lang;
  for (const auto& m : next("mean")) p.mean_.push_back(num(m));
  for (const auto& s : next("scale")) p.scale_.push_back(num(s));
  if (p.mean_.size() != cfg.dense_names().size() || p.scale_.size() != p.mean_.size())
    throw fail("dense statistics do not match the slot list");
  const auto n_lex = static_cast<std::size_t>(num(next("lexicon").at(0)));
  std::unordered_map<std::string, double> lex;
  for (std::size_t i = 0; i < n_lex; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw fail("truncated lexicon");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail("bad lexicon entry");
    lex[line.substr(0, tab)] = num(line.substr(tab + 1));
  }
  if (cfg.sentiment) p.lexicon_ = SentimentLexicon::from_entries(lang, std::move(lex), true);
  std::ostringstream rest;
  rest << in.rdbuf();
  p.vocab_ = Vocabulary::parse(rest.str());
  p.fitted_ = true;
  return p;
}

void FeaturePipeline::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << serialize();
}

FeaturePipeline FeaturePipeline::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace hwk
