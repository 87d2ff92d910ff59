#pragma once

// Numeric tables with named columns, written as CSV ('.' decimals, '\n'
// line ends, mandatory header) or as a JSON mirror. Numbers are printed in
// the shortest form that reads back to the same double.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hpi {

/// Bumped whenever a column is added, removed or renamed.
inline constexpr int kSchemaVersion = 1;

enum class TableFormat { Csv, Json };

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);  ///< ConfigError on a width mismatch
  std::size_t column(const std::string& name) const;  ///< index; ConfigError if absent
  friend bool operator==(const Table&, const Table&);
};

std::string format_number(double value);
double parse_number(const std::string& text);

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in, const std::string& name);

void write_json(std::ostream& out, const Table& table);
Table read_json(std::istream& in);

/// Writes dir/<name>.csv or dir/<name>.json and returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, TableFormat format);
Table read_table(const std::filesystem::path& path);

}  // namespace hpi
