#pragma once

// Flat "key = value" run configuration. '#' starts a comment; blank lines
// are skipped; a key may appear once.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hpi {

class RunConfig {
 public:
  RunConfig() = default;
  explicit RunConfig(std::set<std::string> allowed) : allowed_(std::move(allowed)) {}

  /// Merges a document; ConfigError on syntax errors, unknown or repeated keys.
  void parse(std::istream& in, const std::string& source = "config");
  void load(const std::filesystem::path& path);

  /// Command-line override; replaces any earlier value.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  /// Comma-separated list; empty if absent.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& key) const;

 private:
  void check_key(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
};

}  // namespace hpi
