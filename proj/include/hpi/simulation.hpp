#pragma once

// Monte Carlo runs of the Dobrushin strip and the measurements taken on
// the accumulated magnetization field.

#include <cstdint>
#include <functional>
#include <vector>

#include "hpi/contour.hpp"
#include "hpi/exact_solution.hpp"
#include "hpi/lattice.hpp"
#include "hpi/metropolis.hpp"

namespace hpi {

/// Rows kept between the interface line at the right edge and the clamp rows.
inline constexpr int kHeightMargin = 8;
inline constexpr std::size_t kBatches = 32;
/// Share of samples whose contour may touch the clamp rows before a run is
/// flagged as too narrow.
inline constexpr double kEscapeRateLimit = 1e-3;
inline constexpr std::uint64_t kMinProfileSamples = 64;

struct SimParams {
  Couplings couplings;
  double theta = 0.0;
  int n = 0;
  int m = 0;
  std::uint64_t sweeps = 0;          ///< total, thermalization included
  std::uint64_t thermalization = 0;
  std::uint64_t stride = 1;          ///< sweeps per sample
  std::uint64_t seed = 0;
  int threads = 1;
  KernelMode mode = KernelMode::Parallel;

  /// ConfigError unless N >= 1, M >= N max(1, |tan theta|) + kHeightMargin
  /// (M >= 1 at theta = +-pi/2), sweeps > thermalization, stride >= 1,
  /// threads >= 1 and enough samples for kBatches batches.
  void validate() const;
  std::uint64_t sample_count() const { return (sweeps - thermalization) / stride; }
};

/// Called once per sample with the current configuration and its contour.
using SampleObserver = std::function<void(const SpinLattice&, std::uint64_t sample_index, const InterfacePath&)>;

struct SimulationResult {
  int n = 0;
  int m = 0;
  double theta = 0.0;
  std::uint64_t samples = 0;
  /// Per-site means, row-major from the bottom row, N * 2M entries.
  std::vector<double> field_mean;
  std::vector<double> field_stderr;
  /// kBatches per-site batch means, each laid out like field_mean.
  std::vector<std::vector<double>> batch_fields;
  double acceptance_rate = 0.0;
  double escape_rate = 0.0;
  /// Interface height at the middle column (distance from the wall at half
  /// height for theta = +-pi/2), one entry per sample.
  std::vector<double> midpoint_series;
  double tau_int = 0.0;  ///< in samples

  bool escape_warning() const { return escape_rate > kEscapeRateLimit; }
  std::size_t site(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col);
  }
};

/// Runs the chain from the sigma^theta pattern. Deterministic in params
/// apart from `threads`, which never changes the result.
SimulationResult run_simulation(const SimParams& params, const SampleObserver& observer = {});

/// True if the contour reaches the clamp rows (the far wall x = N for
/// theta = +-pi/2).
bool contour_escaped(const InterfacePath& path, const SpinLattice& lattice);

struct ProfilePoint {
  double alpha = 0.0;  ///< bin centre
  double measured = 0.0;
  double stderr_measured = 0.0;
  double predicted = 0.0;  ///< site-averaged limiting profile
  std::size_t sites = 0;
};

struct ProfileBand {
  double arclength = 0.0;  ///< L; 0 selects (N/2) / cos(theta)
  double half_width = 1.0;
  double bin_width = 0.25;
};

/// Bins the field in the band |L' - L| <= half_width of the normal line at
/// arclength L by alpha = y / sqrt(L), with L' = s cos(theta) + t sin(theta)
/// and y = -s sin(theta) + t cos(theta).
std::vector<ProfilePoint> measure_profile(const SimulationResult& result, const Couplings& c,
                                          const ProfileBand& band = {},
                                          Orientation orientation = Orientation::PlusOnPositiveSide);

struct ProfileFit {
  Orientation orientation = Orientation::PlusOnPositiveSide;
  double rms = 0.0;            ///< against the canonical scale, best sign
  double fitted_scale = 0.0;   ///< z per unit alpha from a free fit
  double canonical_scale = 0.0;
  double rms_fitted = 0.0;
};

/// Compares measured bins with |alpha| <= alpha_max to
/// sign m* sgn(alpha) G(scale |alpha|).
ProfileFit fit_profile(const std::vector<ProfilePoint>& points, double theta, const Couplings& c,
                       double alpha_max = 3.0);

struct BulkMagnetization {
  double value = 0.0;
  double stderr_value = 0.0;
  std::size_t sites = 0;
};

/// Mean |<sigma>| over sites at least M/3 from both the interface line and
/// the clamp rows, in the columns [N/4, 3N/4).
BulkMagnetization deep_bulk_magnetization(const SimulationResult& result);

struct AntisymmetryCheck {
  std::size_t pairs = 0;
  std::size_t beyond_3sigma = 0;
  bool pass = false;  ///< fewer than 2% of pairs beyond 3 sigma
};

/// <sigma(s, t)> = -<sigma(s, -t)> site by site; meaningful for theta = 0.
AntisymmetryCheck antisymmetry_check(const SimulationResult& result);

}  // namespace hpi
