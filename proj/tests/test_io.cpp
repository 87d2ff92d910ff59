#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "hpi/config.hpp"
#include "hpi/errors.hpp"
#include "hpi/lattice.hpp"
#include "hpi/snapshot.hpp"
#include "hpi/table.hpp"

using namespace hpi;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hpi_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Table sample_table() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  Table t{"demo", {"x", "y"}, {}};
  t.add_row({0.1, -2.5e-300});
  t.add_row({1.0 / 3.0, nan});
  t.add_row({-inf, 12345678901234567.0});
  return t;
}

}  // namespace

TEST_CASE("numbers round-trip through their text form") {
  for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 6.02214076e23, 4.9e-324, -1.7976931348623157e308}) {
    CHECK(parse_number(format_number(v)) == v);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(std::isnan(parse_number("nan")));
  CHECK_THROWS(parse_number("1.5x"));
  CHECK_THROWS(parse_number(""));
}

TEST_CASE("csv tables") {
  const Table t = sample_table();
  std::ostringstream out;
  write_csv(out, t);
  const std::string text = out.str();
  CHECK(text.rfind("x,y\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  CHECK(read_csv(in, "demo") == t);

  Table narrow{"n", {"a"}, {}};
  CHECK_THROWS_AS(narrow.add_row({1.0, 2.0}), ConfigError);
  CHECK(t.column("y") == 1);
  CHECK_THROWS_AS(t.column("z"), ConfigError);
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS(read_csv(ragged, "r"));
}

TEST_CASE("json tables mirror csv") {
  const Table t = sample_table();
  std::ostringstream out;
  write_json(out, t);
  CHECK(out.str().find("\"schema_version\"") != std::string::npos);
  std::istringstream in(out.str());
  CHECK(read_json(in) == t);

  const auto dir = scratch("tables");
  const auto csv = write_table(dir, t, TableFormat::Csv);
  const auto json = write_table(dir, t, TableFormat::Json);
  CHECK(csv.filename() == "demo.csv");
  CHECK(json.filename() == "demo.json");
  CHECK(read_table(csv) == t);
  CHECK(read_table(json) == t);
}

TEST_CASE("config parsing") {
  RunConfig cfg({"k1", "theta_grid", "N_list", "seed"});
  std::istringstream doc("# couplings\nk1 = 0.6   # trailing\n\ntheta_grid = 0, 0.5,1\nN_list=4,8\n");
  cfg.parse(doc);
  CHECK(cfg.get_double("k1", 0.0) == 0.6);
  CHECK(cfg.get_doubles("theta_grid") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cfg.get_ints("N_list") == std::vector<std::int64_t>{4, 8});
  CHECK(cfg.get_u64("seed", 7) == 7);
  CHECK_THROWS_AS(cfg.require_double("seed"), ConfigError);
  cfg.set("k1", "0.7");
  CHECK(cfg.get_double("k1", 0.0) == 0.7);

  auto bad = [](const std::string& text) {
    RunConfig c({"k1", "seed"});
    std::istringstream in(text);
    c.parse(in);
  };
  CHECK_THROWS_AS(bad("k3 = 1\n"), ConfigError);
  CHECK_THROWS_AS(bad("k1 = 1\nk1 = 2\n"), ConfigError);
  CHECK_THROWS_AS(bad("k1 1\n"), ConfigError);
  CHECK_THROWS_AS(bad("= 1\n"), ConfigError);

  RunConfig typed({"k1", "seed"});
  typed.set("k1", "abc");
  typed.set("seed", "-3");
  CHECK_THROWS_AS(typed.get_double("k1", 0.0), ConfigError);
  CHECK_THROWS_AS(typed.get_u64("seed", 0), ConfigError);
  CHECK_THROWS_AS(typed.set("other", "1"), ConfigError);
  CHECK_THROWS_AS(RunConfig({"k1"}).load("/nonexistent/hpi.cfg"), ConfigError);
}

TEST_CASE("snapshots round-trip") {
  SpinLattice a = build_boundary(0.3, 6, 9);
  a.grid.at(2, 10) = -1;
  const SpinLattice b = build_boundary(-std::acos(0.0), 5, 4);
  std::stringstream buf;
  write_snapshot(buf, a, 17);
  write_snapshot(buf, b, 18);
  CHECK(buf.str().size() == 2 * kSnapshotHeaderBytes + 6 * 18 + 5 * 8);
  CHECK(buf.str().substr(0, 4) == "HPIS");

  const auto frames = read_snapshots(buf);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].sample_index == 17);
  CHECK(frames[0].lattice.theta == 0.3);
  CHECK(frames[0].lattice.grid.at(2, 10) == -1);
  CHECK(frames[0].lattice.grid.at(-1, 0) == a.grid.at(-1, 0));
  CHECK(frames[0].lattice.grid.at(6, 17) == a.grid.at(6, 17));
  CHECK(frames[1].lattice.n == 5);
  CHECK(frames[1].lattice.m == 4);
}

TEST_CASE("damaged snapshots are rejected") {
  const SpinLattice a = build_boundary(0.0, 4, 3);
  std::ostringstream out;
  write_snapshot(out, a, 0);
  const std::string good = out.str();

  auto read = [](const std::string& bytes) {
    std::istringstream in(bytes);
    return read_snapshots(in);
  };
  CHECK(read(good).size() == 1);
  CHECK_THROWS_AS(read(good.substr(0, good.size() - 1)), SnapshotError);
  CHECK_THROWS_AS(read(good.substr(0, 20)), SnapshotError);
  std::string magic = good;
  magic[0] = 'X';
  CHECK_THROWS_AS(read(magic), SnapshotError);
  std::string version = good;
  version[4] = 9;
  CHECK_THROWS_AS(read(version), SnapshotError);
  std::string spin = good;
  spin[kSnapshotHeaderBytes + 3] = 0;
  CHECK_THROWS_AS(read(spin), SnapshotError);

  const auto dir = scratch("snapdir");
  CHECK_THROWS_AS(read_snapshot_dir(dir), SnapshotError);
  CHECK_THROWS_AS(read_snapshot_dir(dir / "missing"), SnapshotError);
  std::ofstream(dir / "b.bin", std::ios::binary) << good;
  std::ofstream(dir / "a.bin", std::ios::binary) << good << good;
  std::ofstream(dir / "notes.txt") << "ignored";
  CHECK(read_snapshot_dir(dir).size() == 3);
}
