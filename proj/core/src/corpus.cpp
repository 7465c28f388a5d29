// SPDX-License-Identifier: Apache-2.0
#include "hwk/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "hwk/error.hpp"
#include "hwk/random.hpp"
#include "hwk/unicode.hpp"

namespace hwk {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

bool parse_bit(std::string_view cell, std::string_view source, std::size_t line,
               std::string_view column) {
  if (cell == "0") return false;
  if (cell == "1") return true;
  throw Error(Errc::BadLabelValue, fmt::format("{}:{}: column {} must be 0 or 1, got '{}'",
                                               source, line, column, cell));
}

}  // namespace

Lang parse_lang(std::string_view name) {
  const auto n = lower_ascii(name);
  if (n == "en") return Lang::EN;
  if (n == "es") return Lang::ES;
  throw Error(Errc::UnsupportedLanguage, fmt::format("unsupported language '{}'", name));
}

std::string_view to_string(Lang lang) { return lang == Lang::EN ? "en" : "es"; }

Dim parse_dim(std::string_view name) {
  const auto n = lower_ascii(name);
  if (n == "hs") return Dim::HS;
  if (n == "tr") return Dim::TR;
  if (n == "ag") return Dim::AG;
  throw Error(Errc::InvalidArgument, fmt::format("unknown label dimension '{}'", name));
}

std::string_view to_string(Dim dim) {
  switch (dim) {
    case Dim::HS: return "HS";
    case Dim::TR: return "TR";
    case Dim::AG: return "AG";
  }
  return "?";
}

bool LabelSet::get(Dim dim) const {
  switch (dim) {
    case Dim::HS: return hs;
    case Dim::TR: return tr;
    case Dim::AG: return ag;
  }
  return false;
}

void LabelSet::set(Dim dim, bool value) {
  switch (dim) {
    case Dim::HS: hs = value; break;
    case Dim::TR: tr = value; break;
    case Dim::AG: ag = value; break;
  }
}

bool Dataset::labeled() const {
  return !tweets.empty() &&
         std::all_of(tweets.begin(), tweets.end(), [](const Tweet& t) { return t.labels.has_value(); });
}

std::vector<int> Dataset::labels(Dim dim) const {
  std::vector<int> out;
  out.reserve(tweets.size());
  for (const auto& t : tweets) {
    if (!t.labels)
      throw Error(Errc::Unlabeled, fmt::format("tweet '{}' has no labels", t.id));
    out.push_back(t.labels->get(dim) ? 1 : 0);
  }
  return out;
}

Dataset parse_dataset(std::string_view content, Lang lang, const LoadOptions& options,
                      std::string_view source) {
  Dataset ds;
  ds.lang = lang;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= content.size()) return false;
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    line = content.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view header;
  if (!next_line(header))
    throw Error(Errc::MissingColumn, fmt::format("{}: empty file, header row required", source));
  if (!unicode::is_valid(header))
    throw Error(Errc::EncodingError, fmt::format("{}:1: header is not valid UTF-8", source));

  const auto columns = split_tabs(header);
  int col_id = -1, col_text = -1, col_hs = -1, col_tr = -1, col_ag = -1;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto name = lower_ascii(columns[i]);
    int* slot = name == "id" ? &col_id
              : name == "text" ? &col_text
              : name == "hs" ? &col_hs
              : name == "tr" ? &col_tr
              : name == "ag" ? &col_ag
              : nullptr;
    if (!slot)
      throw Error(Errc::MissingColumn,
                  fmt::format("{}:1: unexpected column '{}'", source, columns[i]));
    if (*slot >= 0)
      throw Error(Errc::MissingColumn,
                  fmt::format("{}:1: duplicate column '{}'", source, columns[i]));
    *slot = static_cast<int>(i);
  }
  if (col_id < 0) throw Error(Errc::MissingColumn, fmt::format("{}:1: missing column 'id'", source));
  if (col_text < 0)
    throw Error(Errc::MissingColumn, fmt::format("{}:1: missing column 'text'", source));
  if ((col_tr >= 0 || col_ag >= 0) && col_hs < 0)
    throw Error(Errc::MissingColumn,
                fmt::format("{}:1: TR/AG columns require an HS column", source));

  std::unordered_set<std::string> seen;
  std::string_view line;
  while (next_line(line)) {
    if (line.empty() && pos >= content.size()) break;  // trailing newline
    if (!unicode::is_valid(line))
      throw Error(Errc::EncodingError, fmt::format("{}:{}: invalid UTF-8", source, line_no));
    const auto cells = split_tabs(line);
    if (cells.size() != columns.size())
      throw Error(Errc::MalformedRow,
                  fmt::format("{}:{}: expected {} tab-separated fields, found {}", source,
                              line_no, columns.size(), cells.size()));
    Tweet t;
    t.lang = lang;
    t.id = std::string(cells[col_id]);
    t.text = std::string(cells[col_text]);
    if (t.id.empty())
      throw Error(Errc::MalformedRow, fmt::format("{}:{}: empty id", source, line_no));
    if (blank(t.text))
      throw Error(Errc::MalformedRow, fmt::format("{}:{}: empty text", source, line_no));
    if (!seen.insert(t.id).second)
      throw Error(Errc::DuplicateId,
                  fmt::format("{}:{}: duplicate id '{}'", source, line_no, t.id));
    if (col_hs >= 0) {
      LabelSet labels;
      labels.hs = parse_bit(cells[col_hs], source, line_no, "HS");
      if (col_tr >= 0) labels.tr = parse_bit(cells[col_tr], source, line_no, "TR");
      if (col_ag >= 0) labels.ag = parse_bit(cells[col_ag], source, line_no, "AG");
      if (!labels.consistent()) {
        if (!options.coerce_labels)
          throw Error(Errc::BadLabelValue,
                      fmt::format("{}:{}: TR/AG set on a tweet with HS=0", source, line_no));
        labels.tr = labels.ag = false;
      }
      t.labels = labels;
    }
    ds.tweets.push_back(std::move(t));
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, Lang lang, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  auto ds = parse_dataset(buf.str(), lang, options, path.string());
  ds.split_name = path.stem().string();
  return ds;
}

std::string serialize_dataset(const Dataset& ds) {
  const bool with_labels = ds.labeled();
  std::string out = with_labels ? "id\ttext\tHS\tTR\tAG\n" : "id\ttext\n";
  for (const auto& t : ds.tweets) {
    out += t.id;
    out += '\t';
    out += t.text;
    if (with_labels) {
      out += fmt::format("\t{}\t{}\t{}", int(t.labels->hs), int(t.labels->tr), int(t.labels->ag));
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, fmt::format("cannot write '{}'", path.string()));
  out << serialize_dataset(ds);
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices, std::string split_name) {
  Dataset out;
  out.lang = ds.lang;
  out.split_name = std::move(split_name);
  out.tweets.reserve(indices.size());
  for (auto i : indices) out.tweets.push_back(ds.tweets.at(i));
  return out;
}

Dataset concat(const Dataset& a, const Dataset& b, std::string split_name) {
  if (a.lang != b.lang)
    throw Error(Errc::InvalidArgument, "cannot concatenate datasets of different languages");
  Dataset out = a;
  out.split_name = std::move(split_name);
  std::unordered_set<std::string> ids;
  for (const auto& t : a.tweets) ids.insert(t.id);
  for (const auto& t : b.tweets) {
    if (!ids.insert(t.id).second)
      throw Error(Errc::DuplicateId, fmt::format("duplicate id '{}' across datasets", t.id));
    out.tweets.push_back(t);
  }
  return out;
}

Splits stratified_split(const Dataset& ds, const SplitFractions& f, Dim key, std::uint64_t seed) {
  const std::array<double, 3> fr{f.train, f.val, f.test};
  for (double x : fr)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw Error(Errc::BadFractions, "split fractions must be finite and non-negative");
  if (std::abs(fr[0] + fr[1] + fr[2] - 1.0) > 1e-9)
    throw Error(Errc::BadFractions,
                fmt::format("split fractions sum to {}, expected 1", fr[0] + fr[1] + fr[2]));

  const auto y = ds.labels(key);
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);

  Rng rng(seed);
  std::array<std::vector<std::size_t>, 3> parts;
  for (int c = 0; c < 2; ++c) {
    auto& members = by_class[c];
    if (members.empty()) continue;
    rng.shuffle(std::span<std::size_t>(members));
    const double n = static_cast<double>(members.size());
    const auto cut1 = static_cast<std::size_t>(std::llround(fr[0] * n));
    const auto cut2 = std::max(cut1, static_cast<std::size_t>(std::llround((fr[0] + fr[1]) * n)));
    const std::array<std::size_t, 4> bounds{0, cut1, std::min(cut2, members.size()), members.size()};
    for (int s = 0; s < 3; ++s) {
      if (fr[s] > 0.0 && bounds[s + 1] == bounds[s])
        throw Error(Errc::ClassTooSmall,
                    fmt::format("class {}={} has {} tweets, too few for a {:.3f} split", to_string(key),
                                c, members.size(), fr[s]));
      parts[s].insert(parts[s].end(), members.begin() + static_cast<std::ptrdiff_t>(bounds[s]),
                      members.begin() + static_cast<std::ptrdiff_t>(bounds[s + 1]));
    }
  }
  for (auto& p : parts) std::sort(p.begin(), p.end());
  return Splits{subset(ds, parts[0], "train"), subset(ds, parts[1], "val"),
                subset(ds, parts[2], "test")};
}

}  // namespace hwk
