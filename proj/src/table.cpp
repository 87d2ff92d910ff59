#include "hpi/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "hpi/errors.hpp"
#include "json.hpp"

namespace hpi {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw ConfigError("row width does not match the columns of " + name);
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw ConfigError("table " + name + " has no column " + col);
}

bool operator==(const Table& a, const Table& b) {
  if (a.name != b.name || a.columns != b.columns || a.rows.size() != b.rows.size()) return false;
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      const double x = a.rows[r][c], y = b.rows[r][c];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
  }
  return true;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) throw ConfigError("not a number: '" + text + "'");
  return value;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
    out << '\n';
  }
}

Table read_csv(std::istream& in, const std::string& name) {
  Table table;
  table.name = name;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("CSV " + name + " has no header");
  table.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const std::string& cell : split_csv_line(line)) row.push_back(parse_number(cell));
    table.add_row(std::move(row));
  }
  return table;
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = table.name;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) {
      // JSON has no NaN or infinity; non-finite values travel as strings.
      if (std::isfinite(v)) {
        r.push_back(v);
      } else {
        r.push_back(format_number(v));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(1) << '\n';
}

Table read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON table: ") + e.what());
  }
  if (doc.value("schema_version", 0) != kSchemaVersion) throw ConfigError("unsupported table schema version");
  Table table;
  table.name = doc.at("name").get<std::string>();
  table.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& r : doc.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_string() ? parse_number(v.get<std::string>()) : v.get<double>());
    table.add_row(std::move(row));
  }
  return table;
}

std::filesystem::path write_table(const std::filesystem::path& dir, const Table& table, TableFormat format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / (table.name + (format == TableFormat::Csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  if (format == TableFormat::Csv) {
    write_csv(out, table);
  } else {
    write_json(out, table);
  }
  return path;
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  if (path.extension() == ".json") return read_json(in);
  return read_csv(in, path.stem().string());
}

}  // namespace hpi
