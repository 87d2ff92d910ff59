#include "hpi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "hpi/errors.hpp"

namespace hpi {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

}  // namespace

void RunConfig::check_key(const std::string& key) const {
  if (key.empty()) throw ConfigError("empty configuration key");
  if (!allowed_.empty() && allowed_.count(key) == 0) throw ConfigError("unknown configuration key '" + key + "'");
}

void RunConfig::parse(std::istream& in, const std::string& source) {
  std::string line;
  std::set<std::string> seen;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    check_key(key);
    if (!seen.insert(key).second) throw ConfigError(source + ": key '" + key + "' appears twice");
    values_[key] = trim(line.substr(eq + 1));
  }
}

void RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  parse(in, path.string());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  check_key(key);
  values_[key] = value;
}

const std::string& RunConfig::raw(const std::string& key) const { return values_.at(key); }

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_real(key, raw(key)) : fallback;
}

double RunConfig::require_double(const std::string& key) const {
  if (!has(key)) throw ConfigError("missing required key '" + key + "'");
  return parse_real(key, raw(key));
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? parse_integer<std::int64_t>(key, raw(key)) : fallback;
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? parse_integer<std::uint64_t>(key, raw(key)) : fallback;
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  for (const auto& item : split_list(raw(key))) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::int64_t> RunConfig::get_ints(const std::string& key) const {
  std::vector<std::int64_t> out;
  if (!has(key)) return out;
  for (const auto& item : split_list(raw(key))) out.push_back(parse_integer<std::int64_t>(key, item));
  return out;
}

}  // namespace hpi
