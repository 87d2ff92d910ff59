#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "doctest.h"
#include "hpi/cli.hpp"
#include "hpi/lattice.hpp"
#include "hpi/snapshot.hpp"
#include "hpi/table.hpp"

using namespace hpi;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hpi_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

Run invoke(std::vector<std::string> args, const fs::path& dir) {
  args.insert(args.begin(), {"--out", dir.string()});
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("tension table") {
  const auto dir = scratch("tension");
  const Run r = invoke({"tension", "--set", "theta_grid=-0.5,0,0.5,1.56"}, dir);
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("1.56") != std::string::npos);
  const Table t = read_table(dir / "tension.csv");
  CHECK(t.columns == std::vector<std::string>{"theta", "nu", "tau", "stiffness", "z_unit"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1][1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.rows[1][2] == doctest::Approx(2.0 * (0.6 - 0.31083244259923256173)).epsilon(1e-12));
  CHECK(t.rows[0][2] == doctest::Approx(t.rows[2][2]).epsilon(1e-12));
  CHECK(t.rows[0][3] == doctest::Approx(t.rows[2][3]).epsilon(1e-9));
  CHECK(t.rows[0][1] == doctest::Approx(-t.rows[2][1]).epsilon(1e-12));

  const Run json = invoke({"--format", "json", "tension", "--set", "theta_grid=0"}, dir);
  CHECK(json.code == kExitOk);
  CHECK(fs::exists(dir / "tension.json"));
}

TEST_CASE("invalid parameters exit with code 2 and name the parameter") {
  const auto dir = scratch("errors");
  const Run weak = invoke({"tension", "--set", "k1=0.3", "--set", "k2=0.3"}, dir);
  CHECK(weak.code == kExitDomain);
  CHECK(weak.err.find("'couplings'") != std::string::npos);
  const Run neg = invoke({"tension", "--set", "k1=-1"}, dir);
  CHECK(neg.code == kExitDomain);
  CHECK(neg.err.find("'k1'") != std::string::npos);
  CHECK(invoke({"profile", "--set", "orientation=0"}, dir).err.find("'orientation'") != std::string::npos);
  CHECK(invoke({"tension", "--set", "bogus=1"}, dir).code == kExitDomain);
  CHECK(invoke({"tension", "--config", "/nonexistent.cfg"}, dir).code == kExitDomain);
  CHECK(invoke({"groundstate", "--set", "theta=2"}, dir).code == kExitDomain);
  CHECK(invoke({"simulate", "--set", "N=8", "--set", "M=8"}, dir).code == kExitDomain);
  CHECK(invoke({"nonsense"}, dir).code == kExitDomain);
  CHECK(invoke({}, dir).code == kExitDomain);
}

TEST_CASE("profile table") {
  const auto dir = scratch("profile");
  const Run r = invoke({"profile", "--set", "theta=0.3", "--set", "alpha_grid=-1,0,1"}, dir);
  REQUIRE(r.code == kExitOk);
  const Table t = read_table(dir / "profile.csv");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[1][2] == 0.0);
  CHECK(t.rows[2][2] == doctest::Approx(-0.71438712965324838772).epsilon(1e-9));
  CHECK(t.rows[0][2] == doctest::Approx(-t.rows[2][2]).epsilon(1e-12));
  CHECK(t.rows[0][1] == doctest::Approx(-t.rows[2][1]).epsilon(1e-12));

  invoke({"profile", "--set", "theta=0.3", "--set", "alpha_grid=1", "--set", "orientation=1"}, dir);
  CHECK(read_table(dir / "profile.csv").rows[0][2] == doctest::Approx(0.71438712965324838772).epsilon(1e-9));
}

TEST_CASE("simulate is reproducible in reference mode") {
  setenv("HPI_REFERENCE_MODE", "1", 1);
  const std::vector<std::string> args{"simulate", "--seed", "5",          "--set", "N=8",
                                      "--set",    "M=16",   "--set",      "sweeps=2000",
                                      "--set",    "thermalization=200",   "--set", "theta=0.2"};
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  const Run ra = invoke(args, a), rb = invoke(args, b);
  unsetenv("HPI_REFERENCE_MODE");
  REQUIRE(ra.code == kExitOk);
  REQUIRE(rb.code == kExitOk);
  for (const char* f : {"snapshots.bin", "field.csv", "profile_measured.csv", "summary.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(read_snapshot_file(a / "snapshots.bin").size() == 180);

  const auto c = scratch("sim_c");
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  REQUIRE(invoke(threaded, c).code == kExitOk);
  CHECK(slurp(a / "field.csv") == slurp(c / "field.csv"));
}

TEST_CASE("simulate at theta = 0 passes the antisymmetry check") {
  const auto dir = scratch("sim_flat");
  const Run r = invoke({"simulate", "--set", "N=16", "--set", "M=24", "--set", "sweeps=20000", "--set", "seed=9"}, dir);
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("antisymmetry pass") != std::string::npos);
  const Table s = read_table(dir / "summary.csv");
  CHECK(s.rows[0][s.column("antisymmetry_pass")] == 1.0);
  CHECK(s.rows[0][s.column("escape_rate")] == 0.0);
}

TEST_CASE("simulate reports an escaping interface with code 3") {
  const auto dir = scratch("sim_escape");
  const Run r = invoke({"simulate", "--set", "k1=0.3", "--set", "k2=0.3", "--set", "N=8", "--set", "M=16",
                     "--set", "sweeps=2000", "--set", "thermalization=200"},
                    dir);
  CHECK(r.code == kExitEscape);
  CHECK(r.err.find("increase M") != std::string::npos);
  CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("groundstate") {
  const auto dir = scratch("ground");
  const Run flat = invoke({"groundstate", "--set", "theta=0", "--set", "N_list=8,16"}, dir);
  REQUIRE(flat.code == kExitOk);
  CHECK(flat.out.find("flat path") != std::string::npos);
  const Table t = read_table(dir / "groundstate.csv");
  CHECK(t.rows[1][t.column("staircase_length")] == 16.0);
  CHECK(t.rows[1][t.column("rise")] == 0.0);

  const Run tilted = invoke({"groundstate", "--set", "theta=0.3926990816987241", "--set", "N_list=64,256,1024,4096"}, dir);
  REQUIRE(tilted.code == kExitOk);
  const auto at = tilted.out.find("OZ coefficient ");
  REQUIRE(at != std::string::npos);
  const double coefficient = std::stod(tilted.out.substr(at + 15));
  CHECK(std::abs(coefficient + 0.5) < 0.05);
  const Table g = read_table(dir / "groundstate.csv");
  for (const auto& row : g.rows) {
    CHECK(row[g.column("staircase_length")] == row[0] + row[g.column("staircase_rise")]);
  }
}

TEST_CASE("analyze") {
  const auto empty = scratch("analyze_empty");
  fs::create_directories(empty);
  CHECK(invoke({"analyze", "--set", "snapshot_dir=" + empty.string()}, empty / "out").code == kExitSnapshot);
  CHECK(invoke({"analyze"}, empty / "out").code == kExitDomain);

  const auto dir = scratch("analyze_ground");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "frames.bin", std::ios::binary);
    for (int i = 0; i < 4; ++i) write_snapshot(f, build_boundary(0.0, 16, 12), static_cast<std::uint64_t>(i));
  }
  const Run r = invoke({"analyze", "--set", "snapshot_dir=" + dir.string()}, dir / "out");
  REQUIRE(r.code == kExitOk);
  const Table c = read_table(dir / "out" / "containment.csv");
  REQUIRE(c.rows.size() == 3);
  for (const auto& row : c.rows) CHECK(row[1] == 1.0);
  const Table tail = read_table(dir / "out" / "tail.csv");
  CHECK(tail.rows[0][0] == 15.0);
  CHECK(tail.rows[0][1] == 1.0);

  {
    std::ofstream f(dir / "other.bin", std::ios::binary);
    write_snapshot(f, build_boundary(0.0, 12, 12), 9);
  }
  CHECK(invoke({"analyze", "--set", "snapshot_dir=" + dir.string()}, dir / "out").code == kExitSnapshot);
}
