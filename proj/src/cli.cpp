#include "hpi/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "hpi/config.hpp"
#include "hpi/contour.hpp"
#include "hpi/errors.hpp"
#include "hpi/exact_solution.hpp"
#include "hpi/ground_state.hpp"
#include "hpi/simulation.hpp"
#include "hpi/snapshot.hpp"
#include "hpi/table.hpp"

namespace hpi {

namespace {

struct Io {
  std::ostream& out;
  std::ostream& err;
  std::filesystem::path dir;
  TableFormat format;
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(lo + (hi - lo) * i / (count - 1));
  return v;
}

Couplings read_couplings(const RunConfig& cfg, bool need_subcritical) {
  const Couplings c = Couplings::make(cfg.get_double("k1", 0.6), cfg.get_double("k2", 0.6));
  if (need_subcritical && !c.subcritical()) {
    throw DomainError("couplings", "k1, k2 are not subcritical: need sinh(2 k1) sinh(2 k2) > 1");
  }
  return c;
}

void emit(const Io& io, const Table& table) {
  const auto path = write_table(io.dir, table, io.format);
  io.out << "wrote " << path.string() << '\n';
}

int cmd_tension(const RunConfig& cfg, const Io& io) {
  const Couplings c = read_couplings(cfg, true);
  std::vector<double> grid = cfg.get_doubles("theta_grid");
  if (grid.empty()) grid = linspace(-1.5, 1.5, 31);
  const double margin = cfg.get_double("theta_margin", kThetaMargin);
  if (!(margin >= kThetaMargin)) throw DomainError("theta_margin", "must be at least the stiffness margin", kThetaMargin);

  Table table{"tension", {"theta", "nu", "tau", "stiffness", "z_unit"}, {}};
  for (double theta : grid) {
    if (std::abs(theta) >= std::numbers::pi / 2.0 - margin) {
      io.err << "warning: theta = " << format_number(theta) << " lies within " << format_number(margin)
             << " of pi/2; row skipped\n";
      continue;
    }
    const SaddleSolution s = solve_saddle(theta, c);
    table.add_row({theta, s.nu, surface_tension(theta, c), stiffness(theta, c), z_scaling(1.0, theta, c)});
  }
  emit(io, table);
  return kExitOk;
}

int cmd_profile(const RunConfig& cfg, const Io& io) {
  const Couplings c = read_couplings(cfg, true);
  const double theta = cfg.get_double("theta", 0.0);
  std::vector<double> grid = cfg.get_doubles("alpha_grid");
  if (grid.empty()) grid = linspace(-3.0, 3.0, 25);
  const auto sign = cfg.get_int("orientation", -1);
  if (sign != 1 && sign != -1) throw DomainError("orientation", "must be -1 (minus phase at z > 0) or 1");
  const auto orientation = static_cast<Orientation>(sign);

  Table table{"profile", {"alpha", "z", "magnetization"}, {}};
  for (double alpha : grid) {
    table.add_row({alpha, z_scaling(alpha, theta, c), limiting_profile(alpha, theta, c, orientation)});
  }
  emit(io, table);
  return kExitOk;
}

bool reference_mode() {
  const char* v = std::getenv("HPI_REFERENCE_MODE");
  return v != nullptr && std::string(v) == "1";
}

SimParams read_sim_params(const RunConfig& cfg) {
  SimParams p;
  p.couplings = Couplings::make(cfg.get_double("k1", 0.6), cfg.get_double("k2", 0.6));
  p.theta = cfg.get_double("theta", 0.0);
  p.n = static_cast<int>(cfg.get_int("N", 64));
  p.m = static_cast<int>(cfg.get_int("M", 96));
  p.sweeps = cfg.get_u64("sweeps", 20000);
  p.thermalization = cfg.get_u64("thermalization", 2000);
  p.stride = cfg.get_u64("stride", 10);
  p.seed = cfg.get_u64("seed", 1);
  p.threads = static_cast<int>(cfg.get_int("threads", 1));
  p.mode = KernelMode::Parallel;
  if (reference_mode()) {
    p.mode = KernelMode::Reference;
    p.threads = 1;
  }
  return p;
}

int cmd_simulate(const RunConfig& cfg, const Io& io) {
  const SimParams params = read_sim_params(cfg);
  params.validate();
  const std::uint64_t samples = params.sample_count();
  std::uint64_t snapshot_stride = cfg.get_u64("snapshot_stride", 0);
  if (snapshot_stride == 0) snapshot_stride = std::max<std::uint64_t>(1, samples / 1000);

  std::filesystem::create_directories(io.dir);
  const auto snap_path = io.dir / "snapshots.bin";
  std::ofstream snaps(snap_path, std::ios::binary);
  if (!snaps) throw ConfigError("cannot write " + snap_path.string());
  const SimulationResult result =
      run_simulation(params, [&](const SpinLattice& lattice, std::uint64_t index, const InterfacePath&) {
        if (index % snapshot_stride == 0) write_snapshot(snaps, lattice, index);
      });
  snaps.close();
  io.out << "wrote " << snap_path.string() << '\n';

  Table field{"field", {"s", "t", "mean", "stderr"}, {}};
  for (int row = 0; row < 2 * result.m; ++row) {
    for (int col = 0; col < result.n; ++col) {
      const std::size_t i = result.site(col, row);
      field.add_row({col + 0.5, row - result.m + 0.5, result.field_mean[i], result.field_stderr[i]});
    }
  }
  emit(io, field);

  const Couplings& c = params.couplings;
  const double m_star = spontaneous_magnetization(c);
  Table profile{"profile_measured", {"alpha", "measured", "stderr", "predicted", "sites"}, {}};
  if (!is_vertical(params.theta) && c.subcritical() && result.samples >= kMinProfileSamples) {
    const auto points = measure_profile(result, c);
    for (const ProfilePoint& p : points) {
      profile.add_row({p.alpha, p.measured, p.stderr_measured, p.predicted, static_cast<double>(p.sites)});
    }
    const ProfileFit fit = fit_profile(points, params.theta, c);
    io.out << "profile: orientation " << static_cast<int>(fit.orientation) << ", rms " << format_number(fit.rms)
           << " (m* = " << format_number(m_star) << "), fitted scale " << format_number(fit.fitted_scale)
           << " vs " << format_number(fit.canonical_scale) << '\n';
  } else {
    io.err << "warning: no profile for this run (vertical interface, supercritical couplings or too few samples)\n";
  }
  emit(io, profile);

  double bulk = std::numeric_limits<double>::quiet_NaN(), bulk_err = bulk;
  try {
    const BulkMagnetization b = deep_bulk_magnetization(result);
    bulk = b.value;
    bulk_err = b.stderr_value;
  } catch (const StatisticsError& e) {
    io.err << "warning: " << e.what() << '\n';
  }
  double antisymmetric = std::numeric_limits<double>::quiet_NaN();
  std::string antisymmetry_text = "n/a";
  if (params.theta == 0.0) {
    const AntisymmetryCheck check = antisymmetry_check(result);
    antisymmetric = check.pass ? 1.0 : 0.0;
    antisymmetry_text = std::string(check.pass ? "pass" : "fail") + " (" + std::to_string(check.beyond_3sigma) + "/" +
                        std::to_string(check.pairs) + " pairs beyond 3 sigma)";
  }
  Table summary{"summary",
                {"samples", "acceptance_rate", "tau_int", "escape_rate", "bulk_magnetization", "bulk_stderr", "m_star",
                 "antisymmetry_pass"},
                {}};
  summary.add_row({static_cast<double>(result.samples), result.acceptance_rate, result.tau_int, result.escape_rate, bulk,
                   bulk_err, m_star, antisymmetric});
  emit(io, summary);

  io.out << "samples " << result.samples << ", acceptance rate " << format_number(result.acceptance_rate)
         << ", tau_int " << format_number(result.tau_int) << " samples, escape rate "
         << format_number(result.escape_rate) << '\n';
  io.out << "deep-bulk |m| " << format_number(bulk) << " +- " << format_number(bulk_err) << " (m* "
         << format_number(m_star) << "), antisymmetry " << antisymmetry_text << '\n';
  if (result.escape_warning()) {
    io.err << "error: the contour reached the clamp rows in " << format_number(result.escape_rate * 100.0)
           << "% of samples (limit " << format_number(kEscapeRateLimit * 100.0) << "%); increase M\n";
    return kExitEscape;
  }
  return kExitOk;
}

int cmd_groundstate(const RunConfig& cfg, const Io& io) {
  const double theta = cfg.get_double("theta", std::numbers::pi / 8.0);
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2.0)) throw DomainError("theta", "must lie in [0, pi/2)");
  std::vector<std::int64_t> lengths = cfg.get_ints("N_list");
  if (lengths.empty()) {
    for (std::int64_t n = 64; n <= 16384; n *= 2) lengths.push_back(n);
  }
  for (std::int64_t n : lengths) {
    if (n < 1) throw DomainError("N_list", "lengths must be positive");
  }
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  // Angles beyond pi/4 are the same staircases with the axes swapped.
  const double folded = theta > std::numbers::pi / 4.0 ? std::numbers::pi / 2.0 - theta : theta;

  Table table{"groundstate",
              {"N", "rise", "log_binomial", "oz_term", "cross_ratio", "staircase_length", "staircase_rise"},
              {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::int64_t n : lengths) {
    const auto rise = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * std::tan(folded)));
    double log_binomial = 0.0, oz_term = 0.0, cross = nan;
    if (rise > 0) {
      const double r = static_cast<double>(rise) / static_cast<double>(n);
      log_binomial = binomial_log_exact(n, rise);
      oz_term = log_binomial - static_cast<double>(n) * ((1.0 + r) * std::log1p(r) - r * std::log(r));
      const auto shift = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n))));
      if (n >= 3 && rise >= 2) cross = binomial_cross_ratio(n, rise + shift, rise, 3, 2);
    }
    const StaircasePath path = sample_staircase(theta, n, seed);
    std::int64_t path_rise = path.trailing;
    for (std::int64_t inc : path.increments) path_rise += inc;
    table.add_row({static_cast<double>(n), static_cast<double>(rise), log_binomial, oz_term, cross,
                   static_cast<double>(path.length()), static_cast<double>(path_rise)});
  }
  emit(io, table);

  if (folded == 0.0) {
    io.out << "theta = 0: the ground state is the flat path; no fluctuations, OZ fit not applicable\n";
  } else if (lengths.size() >= 3) {
    const OzFit fit = oz_coefficient_fit(folded, lengths);
    io.out << "OZ coefficient " << format_number(fit.coefficient) << " (max residual "
           << format_number(fit.max_abs_residual) << ")\n";
  } else {
    io.err << "warning: OZ fit needs at least three lengths\n";
  }
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, const Io& io) {
  if (!cfg.has("snapshot_dir")) throw ConfigError("missing required key 'snapshot_dir'");
  const std::filesystem::path dir = cfg.values().at("snapshot_dir");
  const std::vector<Snapshot> snaps = read_snapshot_dir(dir);
  const SpinLattice& first = snaps.front().lattice;
  std::vector<InterfacePath> paths;
  paths.reserve(snaps.size());
  for (const Snapshot& s : snaps) {
    if (s.lattice.n != first.n || s.lattice.m != first.m || s.lattice.theta != first.theta) {
      throw SnapshotError("snapshots in " + dir.string() + " describe different lattices");
    }
    try {
      paths.push_back(extract_open_contour(s.lattice));
    } catch (const ExtractionError& e) {
      throw SnapshotError("snapshot " + std::to_string(s.sample_index) + ": " + e.what());
    }
  }
  const double theta = first.theta;
  const bool vertical = is_vertical(theta);

  Table containment{"containment", {"R", "containment_freq"}, {}};
  if (!vertical) {
    std::vector<double> radii = cfg.get_doubles("R_list");
    if (radii.empty()) radii = {2.0, 4.0, 8.0};
    for (double r : radii) {
      const CigarSpec spec{cfg.get_double("d", 1.5), cfg.get_double("kappa", 0.1), r, theta, first.n};
      std::size_t inside = 0;
      for (const InterfacePath& p : paths) inside += cigar_contains(p, spec) ? 1 : 0;
      containment.add_row({r, static_cast<double>(inside) / static_cast<double>(paths.size())});
    }
  }
  emit(io, containment);

  Table width{"width", {"s", "mean", "variance", "stderr", "variance_stderr"}, {}};
  if (!vertical && paths.size() >= kMinWidthPaths) {
    std::vector<int> columns;
    for (std::int64_t c : cfg.get_ints("columns")) columns.push_back(static_cast<int>(c));
    if (columns.empty()) columns = {first.n / 4, first.n / 2, 3 * first.n / 4};
    for (const ColumnMoments& m : width_statistics(paths, columns, theta)) {
      width.add_row({m.s, m.mean, m.variance, m.mean_stderr, m.variance_stderr});
    }
  } else {
    io.err << "warning: width statistics need a non-vertical interface and at least " << kMinWidthPaths
           << " snapshots\n";
  }
  emit(io, width);

  Table wall{"wall", {"N", "h", "wall_fraction"}, {}};
  if (vertical) {
    const auto h = cfg.get_int("h", 2);
    if (h < 0) throw DomainError("h", "must be non-negative");
    wall.add_row({static_cast<double>(first.n), static_cast<double>(h), wall_avoidance(paths, static_cast<int>(h))});
  }
  emit(io, wall);

  const LengthTail tail = length_tail(paths, ground_length(paths.front()));
  Table tail_table{"tail", {"L", "tail_prob"}, {}};
  for (std::size_t i = 0; i < tail.lengths.size(); ++i) {
    tail_table.add_row({static_cast<double>(tail.lengths[i]), tail.tail_probability[i]});
  }
  emit(io, tail_table);
  io.out << paths.size() << " contours, ground length " << tail.ground_length << ", tail decay rate "
         << format_number(tail.decay_rate) << '\n';
  return kExitOk;
}

const std::set<std::string> kSimKeys = {"k1", "k2", "theta", "N", "M", "sweeps", "thermalization",
                                        "stride", "seed", "threads", "snapshot_stride"};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dobrushin interface of the planar Ising model: exact curves, ground states and Monte Carlo"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "hpi_out", format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--threads", threads, "OpenMP threads for the Monte Carlo kernel")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--set", overrides, "override one configuration key, key=value");

  struct Command {
    CLI::App* app;
    std::set<std::string> keys;
    int (*run)(const RunConfig&, const Io&);
  };
  std::vector<Command> commands = {
      {app.add_subcommand("tension", "surface tension and stiffness over an angle grid"),
       {"k1", "k2", "theta_grid", "theta_margin"}, cmd_tension},
      {app.add_subcommand("profile", "limiting magnetization profile across the interface"),
       {"k1", "k2", "theta", "alpha_grid", "orientation"}, cmd_profile},
      {app.add_subcommand("simulate", "Metropolis run of the strip with snapshots, field and profile"), kSimKeys,
       cmd_simulate},
      {app.add_subcommand("groundstate", "zero-temperature staircases, OZ fit and binomial cross-ratios"),
       {"theta", "N_list", "seed"}, cmd_groundstate},
      {app.add_subcommand("analyze", "contour statistics from a snapshot directory"),
       {"snapshot_dir", "d", "kappa", "R_list", "h", "columns"}, cmd_analyze},
  };
  for (auto& c : commands) c.app->fallthrough();

  std::vector<std::string> argv_store{"hpi"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }

  try {
    for (const Command& c : commands) {
      if (!c.app->parsed()) continue;
      RunConfig cfg(c.keys);
      if (!config_path.empty()) cfg.load(config_path);
      for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
        cfg.set(o.substr(0, eq), o.substr(eq + 1));
      }
      if (seed && c.keys.count("seed")) cfg.set("seed", std::to_string(*seed));
      if (threads && c.keys.count("threads")) cfg.set("threads", std::to_string(*threads));
      const Io io{out, err, out_dir, format == "json" ? TableFormat::Json : TableFormat::Csv};
      return c.run(cfg, io);
    }
  } catch (const DomainError& e) {
    err << "error: invalid parameter '" << e.parameter() << "': " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const SnapshotError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSnapshot;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace hpi
