#include "hpi/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hpi/errors.hpp"
#include "hpi/stats.hpp"

namespace hpi {

void SimParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(couplings.k1 > 0.0 && couplings.k2 > 0.0)) fail("couplings k1, k2 must be positive");
  if (!std::isfinite(theta) || std::abs(theta) > std::numbers::pi / 2.0 + 1e-12) fail("theta must lie in [-pi/2, pi/2]");
  if (n < 1) fail("N must be positive");
  if (is_vertical(theta)) {
    if (m < 1) fail("M must be positive");
  } else {
    const double need = n * std::max(1.0, std::abs(std::tan(theta))) + kHeightMargin;
    if (m < need) {
      std::ostringstream msg;
      msg << "M = " << m << " is too small for N = " << n << " at theta = " << theta << "; need M >= "
          << std::ceil(need);
      fail(msg.str());
    }
  }
  if (sweeps <= thermalization) fail("sweeps must exceed thermalization");
  if (stride < 1) fail("stride must be at least 1");
  if (threads < 1) fail("threads must be at least 1");
  if (sample_count() < kBatches) {
    std::ostringstream msg;
    msg << "run yields " << sample_count() << " samples; at least " << kBatches << " are needed";
    fail(msg.str());
  }
}

bool contour_escaped(const InterfacePath& path, const SpinLattice& lattice) {
  if (is_vertical(lattice.theta)) {
    return std::any_of(path.vertices.begin(), path.vertices.end(),
                       [&](const DualPoint& p) { return p.x == lattice.n; });
  }
  return std::any_of(path.vertices.begin(), path.vertices.end(),
                     [&](const DualPoint& p) { return p.y == lattice.m || p.y == -lattice.m; });
}

namespace {

double midpoint_observable(const InterfacePath& path, const SpinLattice& lattice) {
  if (is_vertical(lattice.theta)) {
    const int level = (lattice.theta > 0.0 ? 1 : -1) * (lattice.m / 2);
    int best = lattice.n;
    for (const DualPoint& p : path.vertices) {
      if (p.y == level) best = std::min(best, p.x);
    }
    return best;
  }
  return path.column_heights()[static_cast<std::size_t>(lattice.n / 2)];
}

}  // namespace

SimulationResult run_simulation(const SimParams& params, const SampleObserver& observer) {
  params.validate();
  SpinLattice lattice = build_boundary(params.theta, params.n, params.m);
  const AcceptanceTable acceptance(params.couplings);
  const CounterRng rng(params.seed);

  SimulationResult result;
  result.n = params.n;
  result.m = params.m;
  result.theta = params.theta;
  result.samples = params.sample_count();

  const std::size_t sites = static_cast<std::size_t>(params.n) * static_cast<std::size_t>(2 * params.m);
  std::vector<std::vector<std::int64_t>> batch_sums(kBatches, std::vector<std::int64_t>(sites, 0));
  std::vector<std::uint64_t> batch_counts(kBatches, 0);
  result.midpoint_series.reserve(result.samples);

  std::uint64_t attempted = 0, accepted = 0, escaped = 0, sample = 0;
  for (std::uint64_t sweep = 0; sweep < params.sweeps; ++sweep) {
    const SweepStats st = metropolis_sweep(lattice.grid, acceptance, rng, sweep, params.mode, params.threads);
    if (sweep < params.thermalization) continue;
    attempted += st.attempted;
    accepted += st.accepted;
    if ((sweep - params.thermalization + 1) % params.stride != 0 || sample >= result.samples) continue;

    const std::size_t b = static_cast<std::size_t>(sample * kBatches / result.samples);
    auto& sums = batch_sums[b];
    for (int row = 0; row < 2 * params.m; ++row) {
      for (int col = 0; col < params.n; ++col) sums[result.site(col, row)] += lattice.grid.at(col, row);
    }
    ++batch_counts[b];

    const InterfacePath path = extract_open_contour(lattice);
    if (contour_escaped(path, lattice)) ++escaped;
    result.midpoint_series.push_back(midpoint_observable(path, lattice));
    if (observer) observer(lattice, sample, path);
    ++sample;
  }

  result.acceptance_rate = attempted ? static_cast<double>(accepted) / static_cast<double>(attempted) : 0.0;
  result.escape_rate = static_cast<double>(escaped) / static_cast<double>(result.samples);
  result.tau_int = integrated_autocorrelation_time(result.midpoint_series);

  result.batch_fields.assign(kBatches, std::vector<double>(sites, 0.0));
  result.field_mean.assign(sites, 0.0);
  result.field_stderr.assign(sites, 0.0);
  const auto nb = static_cast<double>(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    const auto count = static_cast<double>(batch_counts[b]);
    for (std::size_t i = 0; i < sites; ++i) result.batch_fields[b][i] = static_cast<double>(batch_sums[b][i]) / count;
  }
  for (std::size_t i = 0; i < sites; ++i) {
    std::int64_t total = 0;
    double mean_of_batches = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
      total += batch_sums[b][i];
      mean_of_batches += result.batch_fields[b][i];
    }
    mean_of_batches /= nb;
    double ss = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const double d = result.batch_fields[b][i] - mean_of_batches;
      ss += d * d;
    }
    result.field_mean[i] = static_cast<double>(total) / static_cast<double>(result.samples);
    result.field_stderr[i] = std::sqrt(ss / (nb - 1.0) / nb);
  }
  return result;
}

std::vector<ProfilePoint> measure_profile(const SimulationResult& result, const Couplings& c,
                                          const ProfileBand& band, Orientation orientation) {
  if (is_vertical(result.theta)) throw DomainError("theta", "no normal profile for a vertical interface");
  if (result.samples < kMinProfileSamples || result.batch_fields.size() != kBatches) {
    std::ostringstream msg;
    msg << "profile needs at least " << kMinProfileSamples << " samples, got " << result.samples;
    throw StatisticsError(msg.str());
  }
  const double cos_t = std::cos(result.theta), sin_t = std::sin(result.theta);
  const double arclength = band.arclength > 0.0 ? band.arclength : (result.n / 2.0) / cos_t;
  const double root_l = std::sqrt(arclength);

  struct Bin {
    std::vector<std::size_t> sites;
    double predicted = 0.0;
  };
  std::map<long, Bin> bins;
  for (int row = 0; row < 2 * result.m; ++row) {
    const double t = row - result.m + 0.5;
    for (int col = 0; col < result.n; ++col) {
      const double s = col + 0.5;
      const double along = s * cos_t + t * sin_t;
      if (std::abs(along - arclength) > band.half_width) continue;
      const double alpha = (-s * sin_t + t * cos_t) / root_l;
      Bin& bin = bins[std::lround(alpha / band.bin_width)];
      bin.sites.push_back(result.site(col, row));
      bin.predicted += limiting_profile(alpha, result.theta, c, orientation);
    }
  }

  std::vector<ProfilePoint> points;
  points.reserve(bins.size());
  for (const auto& [key, bin] : bins) {
    const auto count = static_cast<double>(bin.sites.size());
    ProfilePoint p;
    p.alpha = static_cast<double>(key) * band.bin_width;
    p.sites = bin.sites.size();
    p.predicted = bin.predicted / count;
    std::vector<double> per_batch(kBatches, 0.0);
    for (std::size_t b = 0; b < kBatches; ++b) {
      for (std::size_t i : bin.sites) per_batch[b] += result.batch_fields[b][i];
      per_batch[b] /= count;
    }
    for (std::size_t i : bin.sites) p.measured += result.field_mean[i];
    p.measured /= count;
    p.stderr_measured = batch_means(per_batch, kBatches).error;
    points.push_back(p);
  }
  return points;
}

ProfileFit fit_profile(const std::vector<ProfilePoint>& points, double theta, const Couplings& c, double alpha_max) {
  const double m_star = spontaneous_magnetization(c);
  std::vector<const ProfilePoint*> used;
  for (const ProfilePoint& p : points) {
    if (std::abs(p.alpha) <= alpha_max) used.push_back(&p);
  }
  if (used.size() < 3) throw StatisticsError("profile fit needs at least three bins");

  auto rms = [&](double sign, double scale) {
    double ss = 0.0;
    for (const ProfilePoint* p : used) {
      const double a = p->alpha;
      const double model = sign * m_star * (a > 0.0 ? 1.0 : a < 0.0 ? -1.0 : 0.0) * profile_G(scale * std::abs(a));
      ss += (p->measured - model) * (p->measured - model);
    }
    return std::sqrt(ss / static_cast<double>(used.size()));
  };

  ProfileFit fit;
  fit.canonical_scale = z_scale(theta, c).stiffness_form;
  const double plus = rms(1.0, fit.canonical_scale);
  const double minus = rms(-1.0, fit.canonical_scale);
  fit.orientation = plus <= minus ? Orientation::PlusOnPositiveSide : Orientation::MinusOnPositiveSide;
  fit.rms = std::min(plus, minus);
  const double sign = static_cast<double>(static_cast<int>(fit.orientation));

  // Golden-section search for the scale over a generous bracket.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.05 * fit.canonical_scale, hi = 20.0 * fit.canonical_scale;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = rms(sign, x1), f2 = rms(sign, x2);
  while (hi - lo > 1e-10 * fit.canonical_scale) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = rms(sign, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = rms(sign, x2);
    }
  }
  fit.fitted_scale = 0.5 * (lo + hi);
  fit.rms_fitted = rms(sign, fit.fitted_scale);
  return fit;
}

BulkMagnetization deep_bulk_magnetization(const SimulationResult& result) {
  const double clearance = result.m / 3.0;
  const bool vertical = is_vertical(result.theta);
  const double slope = vertical ? 0.0 : std::tan(result.theta);
  const double cos_t = vertical ? 0.0 : std::cos(result.theta);
  std::vector<std::size_t> chosen;
  for (int row = 0; row < 2 * result.m; ++row) {
    const double t = row - result.m + 0.5;
    if (result.m + 0.5 - std::abs(t) < clearance) continue;
    for (int col = result.n / 4; col < 3 * result.n / 4; ++col) {
      const double s = col + 0.5;
      const double from_line = vertical ? s : std::abs(t - s * slope) * cos_t;
      if (from_line >= clearance) chosen.push_back(result.site(col, row));
    }
  }
  if (chosen.empty()) throw StatisticsError("no deep-bulk sites in this window");

  BulkMagnetization out;
  out.sites = chosen.size();
  std::vector<double> per_batch(result.batch_fields.size(), 0.0);
  for (std::size_t b = 0; b < per_batch.size(); ++b) {
    for (std::size_t i : chosen) per_batch[b] += std::abs(result.batch_fields[b][i]);
    per_batch[b] /= static_cast<double>(chosen.size());
  }
  for (std::size_t i : chosen) out.value += std::abs(result.field_mean[i]);
  out.value /= static_cast<double>(chosen.size());
  out.stderr_value = batch_means(per_batch, per_batch.size()).error;
  return out;
}

AntisymmetryCheck antisymmetry_check(const SimulationResult& result) {
  AntisymmetryCheck check;
  for (int row = result.m; row < 2 * result.m; ++row) {
    const int mirror = 2 * result.m - 1 - row;
    for (int col = 0; col < result.n; ++col) {
      const std::size_t a = result.site(col, row), b = result.site(col, mirror);
      const double se = std::hypot(result.field_stderr[a], result.field_stderr[b]);
      const double dev = std::abs(result.field_mean[a] + result.field_mean[b]);
      ++check.pairs;
      if (dev > 3.0 * se) ++check.beyond_3sigma;
    }
  }
  check.pass = check.pairs > 0 && static_cast<double>(check.beyond_3sigma) < 0.02 * static_cast<double>(check.pairs);
  return check;
}

}  // namespace hpi
