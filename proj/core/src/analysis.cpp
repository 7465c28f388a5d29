// SPDX-License-Identifier: Apache-2.0
#include "hwk/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "hwk/error.hpp"
#include "hwk/textprep.hpp"
#include "hwk/unicode.hpp"

namespace hwk {

namespace {

/// Distinct case-folded patterns present in one tweet.
std::set<std::string> tweet_patterns(const Tweet& t) {
  std::set<std::string> out;
  for (auto& tag : extract_hashtags(t.text)) out.insert(std::move(tag));
  for (auto& tok : surface_tokens(t.text)) out.insert(std::move(tok));
  return out;
}

bool label_of(const Tweet& t, Dim dim) {
  if (!t.labels) throw Error(Errc::Unlabeled, fmt::format("tweet {} has no labels", t.id));
  return t.labels->get(dim);
}

std::string fold(std::string_view s) { return unicode::encode(unicode::to_lower(unicode::decode_lossy(s))); }

std::map<std::string, LabelRate> tally(const Dataset& ds, Dim dim) {
  std::map<std::string, LabelRate> out;
  for (const auto& t : ds.tweets) {
    const bool pos = label_of(t, dim);
    for (const auto& p : tweet_patterns(t)) {
      auto& r = out[p];
      ++r.matches;
      r.positives += pos;
    }
  }
  for (auto& [_, r] : out) r.rate = double(r.positives) / double(r.matches);
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

double HashtagTable::top_share() const {
  double s = 0;
  for (const auto& r : rows) s += r.share;
  return s;
}

std::string HashtagTable::csv() const {
  std::string out = "hashtag,count,share\n";
  for (const auto& r : rows) out += fmt::format("{},{},{:.6f}\n", csv_cell(r.tag), r.count, r.share);
  return out;
}

HashtagTable hashtag_stats(const Dataset& ds, std::size_t top_k) {
  HashtagTable table;
  std::map<std::string, std::size_t> counts;
  for (const auto& t : ds.tweets) {
    const auto tags = extract_hashtags(t.text);
    for (const auto& tag : tags) ++counts[tag];
    table.total_occurrences += tags.size();
    table.tweets_with_tag += !tags.empty();
    table.tweets_with_multiple += tags.size() > 1;
  }
  table.tweets = ds.tweets.size();
  table.distinct = counts.size();
  for (const auto& [tag, n] : counts)
    table.rows.push_back({tag, n, double(n) / double(table.total_occurrences)});
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const HashtagRow& a, const HashtagRow& b) { return a.count > b.count; });
  if (table.rows.size() > top_k) table.rows.resize(top_k);
  return table;
}

double hashtag_likelihood_ratio(const Dataset& a, const Dataset& b, std::size_t min_tags) {
  if (a.tweets.empty() || b.tweets.empty()) throw Error(Errc::EmptyCorpus, "likelihood ratio needs two non-empty datasets");
  auto rate = [&](const Dataset& ds) {
    std::size_t hits = 0;
    for (const auto& t : ds.tweets) hits += extract_hashtags(t.text).size() >= min_tags;
    return double(hits) / double(ds.tweets.size());
  };
  const double rb = rate(b);
  if (rb == 0) throw Error(Errc::NoMatches, fmt::format("no tweet in the second dataset has {} or more hashtags", min_tags));
  return rate(a) / rb;
}

LabelRate conditional_label_rate(const Dataset& ds, std::string_view pattern, Dim dim) {
  const std::string p = fold(pattern);
  if (p.empty() || p == "#") throw Error(Errc::InvalidArgument, "empty pattern");
  const bool is_tag = p.front() == '#';
  LabelRate r;
  for (const auto& t : ds.tweets) {
    bool hit = false;
    if (is_tag) {
      const auto tags = extract_hashtags(t.text);
      hit = std::find(tags.begin(), tags.end(), p) != tags.end();
    } else {
      const auto toks = surface_tokens(t.text);
      hit = std::find(toks.begin(), toks.end(), p) != toks.end();
    }
    if (!hit) continue;
    ++r.matches;
    r.positives += label_of(t, dim);
  }
  if (r.matches == 0) throw Error(Errc::NoMatches, fmt::format("no tweet matches '{}'", pattern));
  r.rate = double(r.positives) / double(r.matches);
  return r;
}

DiscrepancyReport discrepancy_report(const Dataset& train, const Dataset& test, std::size_t min_support, Dim dim) {
  if (min_support == 0) throw Error(Errc::InvalidArgument, "min_support must be at least 1");
  DiscrepancyReport rep;
  rep.min_support = min_support;
  rep.dim = dim;
  const auto a = tally(train, dim);
  const auto b = tally(test, dim);
  for (const auto& [pattern, ra] : a) {
    if (ra.matches < min_support) continue;
    auto it = b.find(pattern);
    if (it == b.end() || it->second.matches < min_support) continue;
    rep.rows.push_back({pattern, ra, it->second, std::abs(ra.rate - it->second.rate)});
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const DiscrepancyRow& x, const DiscrepancyRow& y) { return x.delta > y.delta; });
  if (!train.tweets.empty() && !test.tweets.empty()) {
    try {
      rep.tag_likelihood_ratio = hashtag_likelihood_ratio(train, test);
    } catch (const Error& e) {
      if (e.code() != Errc::NoMatches) throw;
    }
  }
  return rep;
}

std::string DiscrepancyReport::csv() const {
  std::string out = "pattern,train_rate,test_rate,delta,train_support,test_support\n";
  for (const auto& r : rows)
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{}\n", csv_cell(r.pattern), r.train.rate, r.test.rate, r.delta,
                       r.train.matches, r.test.matches);
  return out;
}

std::string DiscrepancyReport::summary(std::size_t top) const {
  std::string out = fmt::format("label drift for {} (min support {}): {} patterns\n", to_string(dim), min_support,
                                rows.size());
  out += fmt::format("tweets with >= 1 hashtag, train vs test: {:.2f}x\n", tag_likelihood_ratio);
  for (std::size_t i = 0; i < std::min(top, rows.size()); ++i) {
    const auto& r = rows[i];
    out += fmt::format("  {:<24} train {:5.1f}% ({:>5})  test {:5.1f}% ({:>5})  delta {:.2f}\n", r.pattern,
                       100 * r.train.rate, r.train.matches, 100 * r.test.rate, r.test.matches, r.delta);
  }
  return out;
}

}  // namespace hwk
