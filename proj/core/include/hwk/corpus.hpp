// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hwk {

enum class Lang { EN, ES };

/// Parses "en"/"es" (case-insensitive); throws UnsupportedLanguage otherwise.
Lang parse_lang(std::string_view name);
std::string_view to_string(Lang lang);

/// The three binary annotation dimensions.
enum class Dim { HS, TR, AG };
inline constexpr std::array<Dim, 3> kAllDims{Dim::HS, Dim::TR, Dim::AG};
Dim parse_dim(std::string_view name);
std::string_view to_string(Dim dim);

struct LabelSet {
  bool hs = false;
  bool tr = false;
  bool ag = false;

  bool get(Dim dim) const;
  void set(Dim dim, bool value);
  /// TR and AG may only be set on hateful tweets.
  bool consistent() const { return hs || (!tr && !ag); }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

struct Tweet {
  std::string id;
  std::string text;
  Lang lang = Lang::EN;
  std::optional<LabelSet> labels;
};

struct Dataset {
  std::vector<Tweet> tweets;
  Lang lang = Lang::EN;
  std::string split_name;

  std::size_t size() const { return tweets.size(); }
  bool empty() const { return tweets.empty(); }
  bool labeled() const;
  /// Labels of one dimension; throws Unlabeled if any tweet lacks labels.
  std::vector<int> labels(Dim dim) const;
};

struct LoadOptions {
  /// Force TR = AG = 0 on rows with HS = 0 instead of rejecting them.
  bool coerce_labels = false;
};

/// Reads the `id<TAB>text<TAB>HS<TAB>TR<TAB>AG` layout. Label columns are
/// optional (HS alone, or none for inference input). Errors name the
/// offending 1-based line number.
Dataset load_dataset(const std::filesystem::path& path, Lang lang,
                     const LoadOptions& options = {});
Dataset parse_dataset(std::string_view content, Lang lang,
                      const LoadOptions& options = {},
                      std::string_view source = "<memory>");

/// Inverse of parse_dataset; writes label columns iff every tweet is labeled.
std::string serialize_dataset(const Dataset& ds);
void save_dataset(const Dataset& ds, const std::filesystem::path& path);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct Splits {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Stratified split on one label dimension. Within each class the tweets are
/// shuffled with a seeded generator and cut into contiguous slices at the
/// rounded cumulative fractions; each output keeps load order.
Splits stratified_split(const Dataset& ds, const SplitFractions& fractions,
                        Dim key, std::uint64_t seed);

/// Dataset holding the tweets at `indices`, in the given order.
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices,
               std::string split_name);

/// Concatenation (e.g. folding a development split into training).
Dataset concat(const Dataset& a, const Dataset& b, std::string split_name);

}  // namespace hwk
