// SPDX-License-Identifier: Apache-2.0
#include "hwk/features/tfidf.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "hwk/error.hpp"

namespace hwk {

namespace {

constexpr std::string_view kMagic = "hwk-vocabulary v1";

void check_range(NgramRange r) {
  if (r.min_n < 1 || r.min_n > r.max_n || r.max_n > 5)
    throw Error(Errc::InvalidArgument,
                fmt::format("n-gram range ({}, {}) outside 1 <= min <= max <= 5", r.min_n, r.max_n));
}

double parse_double(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::FormatError, fmt::format("bad {} '{}'", what, s));
  }
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::FormatError, fmt::format("bad {} '{}'", what, s));
  return v;
}

}  // namespace

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, NgramRange range) {
  std::vector<std::string> out;
  for (int n = range.min_n; n <= range.max_n; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (tokens.size() < un) break;
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t k = 1; k < un; ++k) {
        g += ' ';
        g += tokens[i + k];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::optional<std::uint32_t> Vocabulary::index(const std::string& ngram) const {
  const auto it = lookup_.find(ngram);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::rebuild_index() {
  lookup_.clear();
  lookup_.reserve(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) lookup_.emplace(terms_[i], i);
}

Vocabulary fit_tfidf(const std::vector<TokenSequence>& corpus, NgramRange range, int min_df) {
  check_range(range);
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot fit a vocabulary on zero documents");
  if (min_df < 1) throw Error(Errc::InvalidArgument, "min_df must be >= 1");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    auto grams = ngrams(doc.tokens, range);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }

  Vocabulary v;
  v.range_ = range;
  v.doc_count_ = corpus.size();
  const double n = static_cast<double>(corpus.size());
  for (const auto& [term, count] : df) {
    if (count < static_cast<std::size_t>(min_df)) continue;
    v.terms_.push_back(term);
    v.idf_.push_back(std::log(n / static_cast<double>(count)));
  }
  v.rebuild_index();
  return v;
}

SparseVector transform_tfidf(const TokenSequence& doc, const Vocabulary& vocab) {
  const auto grams = ngrams(doc.tokens, vocab.range());
  SparseVector out;
  if (grams.empty()) return out;
  std::map<std::uint32_t, std::size_t> counts;
  for (const auto& g : grams)
    if (auto idx = vocab.index(g)) ++counts[*idx];
  const double total = static_cast<double>(grams.size());
  for (const auto& [idx, c] : counts) {
    const double value = (static_cast<double>(c) / total) * vocab.idf(idx);
    if (value != 0.0) out.entries.push_back({idx, value});
  }
  return out;
}

std::string Vocabulary::serialize() const {
  std::string out;
  out += kMagic;
  out += '\n';
  out += fmt::format("range\t{}\t{}\ndocs\t{}\nsize\t{}\n", range_.min_n, range_.max_n, doc_count_,
                     terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    out += fmt::format("{}\t{}\t{:.17g}\n", terms_[i], i, idf_[i]);
  return out;
}

std::uint64_t Vocabulary::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](std::string_view why) {
    return Error(Errc::FormatError, fmt::format("vocabulary line {}: {}", lineno, why));
  };
  auto fields = [](const std::string& l) {
    std::vector<std::string_view> f;
    std::string_view rest = l;
    for (;;) {
      const auto tab = rest.find('\t');
      f.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    return f;
  };

  ++lineno;
  if (!std::getline(in, line) || line != kMagic) throw fail("missing header");
  Vocabulary v;
  std::size_t size = 0;
  for (std::string_view key : {"range", "docs", "size"}) {
    ++lineno;
    if (!std::getline(in, line)) throw fail("truncated");
    const auto f = fields(line);
    if (f[0] != key) throw fail(fmt::format("expected '{}'", key));
    if (key == "range") {
      if (f.size() != 3) throw fail("range needs two values");
      v.range_ = {static_cast<int>(parse_uint(f[1], "range")), static_cast<int>(parse_uint(f[2], "range"))};
      check_range(v.range_);
    } else if (key == "docs") {
      v.doc_count_ = parse_uint(f.at(1), "doc count");
    } else {
      size = parse_uint(f.at(1), "size");
    }
  }
  v.terms_.reserve(size);
  v.idf_.reserve(size);
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = fields(line);
    if (f.size() != 3) throw fail("expected ngram<TAB>index<TAB>idf");
    if (parse_uint(f[1], "index") != v.terms_.size()) throw fail("indices must be dense and ordered");
    const double idf = parse_double(f[2], "idf");
    if (!std::isfinite(idf) || idf < 0) throw fail("idf must be finite and >= 0");
    v.terms_.emplace_back(f[0]);
    v.idf_.push_back(idf);
  }
  if (v.terms_.size() != size) throw fail("size does not match entry count");
  v.rebuild_index();
  if (v.lookup_.size() != v.terms_.size()) throw fail("duplicate n-gram");
  return v;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write {}", path.string()));
  out << serialize();
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace hwk
