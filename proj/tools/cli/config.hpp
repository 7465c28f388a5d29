// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hwk::cli {

/// Flat `key = value` settings with dotted keys. Every value remembers where
/// it came from ("file:line", "--flag" or "default") for error messages.
class Config {
 public:
  struct Entry {
    std::string value;
    std::string origin;
  };

  /// '#' starts a comment line; blank lines are ignored. Throws ConfigError.
  static Config parse(std::string_view text, const std::string& source);
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value, std::string origin);
  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  /// Fills missing keys from `defaults` and rejects keys not listed there.
  void resolve(const std::vector<std::pair<std::string, std::string>>& defaults);

  const std::string& str(const std::string& key) const;
  long integer(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  double real(const std::string& key) const;
  bool flag(const std::string& key) const;
  /// Comma-separated list, items trimmed, empty items dropped.
  std::vector<std::string> list(const std::string& key) const;
  std::vector<std::size_t> counts(const std::string& key) const;

  /// Sorted `key = value` lines; parse(snapshot()) reproduces the values.
  std::string snapshot() const;

 private:
  const Entry& entry(const std::string& key) const;
  [[noreturn]] void bad_value(const std::string& key, std::string_view expected) const;

  std::map<std::string, Entry> entries_;
};

}  // namespace hwk::cli
