// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>

#include "hwk/error.hpp"
#include "hwk/neural.hpp"

namespace hwk {

WordIndex WordIndex::build(const std::vector<TokenSequence>& docs, std::size_t max_size,
                           std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : docs)
    for (const auto& tok : doc.tokens) ++counts[tok];
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : counts)
    if (n >= min_count) ranked.emplace_back(tok, n);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (max_size > 0 && ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, n] : ranked) tokens.push_back(tok);
  return from_tokens(std::move(tokens));
}

WordIndex WordIndex::from_tokens(std::vector<std::string> tokens) {
  WordIndex w;
  w.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < w.tokens_.size(); ++i) {
    if (!w.ids_.emplace(w.tokens_[i], i + 2).second)
      throw Error(Errc::DuplicateId, "duplicate token in word index: " + w.tokens_[i]);
  }
  return w;
}

std::size_t WordIndex::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnknown : it->second;
}

std::vector<std::size_t> WordIndex::encode(const std::vector<std::string>& tokens,
                                           std::size_t seq_len) const {
  std::vector<std::size_t> ids(seq_len, kPad);
  for (std::size_t i = 0; i < std::min(seq_len, tokens.size()); ++i) ids[i] = id(tokens[i]);
  return ids;
}

}  // namespace hwk
