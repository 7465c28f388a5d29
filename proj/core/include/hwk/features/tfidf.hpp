// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hwk/features/sparse.hpp"
#include "hwk/textprep.hpp"

namespace hwk {

struct NgramRange {
  int min_n = 1;
  int max_n = 3;
};

/// Space-joined n-grams of every order in range, in document order.
std::vector<std::string> ngrams(const std::vector<std::string>& tokens, NgramRange range);

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  NgramRange range() const { return range_; }
  std::size_t doc_count() const { return doc_count_; }

  std::optional<std::uint32_t> index(const std::string& ngram) const;
  const std::string& term(std::uint32_t index) const { return terms_.at(index); }
  double idf(std::uint32_t index) const { return idf_.at(index); }
  const std::vector<std::string>& terms() const { return terms_; }

  /// FNV-1a over the serialized form; models record it to detect mismatches.
  std::uint64_t checksum() const;

  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend Vocabulary fit_tfidf(const std::vector<TokenSequence>&, NgramRange, int);

 private:
  void rebuild_index();

  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
  NgramRange range_;
  std::size_t doc_count_ = 0;
};

/// idf(t) = ln(N / df(t)) over terms with df >= min_df. Columns are assigned
/// in lexicographic order of the n-gram text.
Vocabulary fit_tfidf(const std::vector<TokenSequence>& corpus, NgramRange range, int min_df = 2);

/// tf(t) = count(t) / (number of n-grams in the document); value = tf * idf.
/// Zero products (idf = 0) are not stored.
SparseVector transform_tfidf(const TokenSequence& doc, const Vocabulary& vocab);

}  // namespace hwk
