// SPDX-License-Identifier: Apache-2.0
#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "hwk/error.hpp"

namespace hwk::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key)
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.' || (c >= 'A' && c <= 'Z')))
      return false;
  return true;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
  Config cfg;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::string where = fmt::format("{}:{}", source, line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(Errc::ConfigError, fmt::format("{}: expected 'key = value', got '{}'", where, line));
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) throw Error(Errc::ConfigError, fmt::format("{}: invalid key '{}'", where, key));
    if (cfg.has(key))
      throw Error(Errc::ConfigError,
                  fmt::format("{}: duplicate key '{}' (first set at {})", where, key, cfg.entries_[key].origin));
    cfg.entries_[key] = {std::string(trim(line.substr(eq + 1))), where};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot read config {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, std::string value, std::string origin) {
  if (!valid_key(key)) throw Error(Errc::ConfigError, fmt::format("{}: invalid key '{}'", origin, key));
  entries_[key] = {std::move(value), std::move(origin)};
}

void Config::resolve(const std::vector<std::pair<std::string, std::string>>& defaults) {
  std::map<std::string, std::string> known(defaults.begin(), defaults.end());
  for (const auto& [key, e] : entries_)
    if (!known.count(key)) throw Error(Errc::ConfigError, fmt::format("{}: unknown key '{}'", e.origin, key));
  for (const auto& [key, value] : defaults)
    if (!has(key)) entries_[key] = {value, "default"};
}

const Config::Entry& Config::entry(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(Errc::ConfigError, fmt::format("missing setting '{}'", key));
  return it->second;
}

void Config::bad_value(const std::string& key, std::string_view expected) const {
  const auto& e = entry(key);
  throw Error(Errc::ConfigError, fmt::format("{}: '{}' expects {}, got '{}'", e.origin, key, expected, e.value));
}

const std::string& Config::str(const std::string& key) const { return entry(key).value; }

long Config::integer(const std::string& key) const {
  const auto& v = str(key);
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, "an integer");
  return out;
}

std::size_t Config::count(const std::string& key) const {
  const long v = integer(key);
  if (v < 0) bad_value(key, "a non-negative integer");
  return std::size_t(v);
}

double Config::real(const std::string& key) const {
  const auto& v = str(key);
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, "a number");
  return out;
}

bool Config::flag(const std::string& key) const {
  const auto& v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, "true or false");
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  std::string_view v = str(key);
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::size_t> Config::counts(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : list(key)) {
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
    if (ec != std::errc() || p != item.data() + item.size()) bad_value(key, "a comma-separated list of integers");
    out.push_back(n);
  }
  return out;
}

std::string Config::snapshot() const {
  std::string out;
  for (const auto& [key, e] : entries_) out += fmt::format("{} = {}\n", key, e.value);
  return out;
}

}  // namespace hwk::cli
