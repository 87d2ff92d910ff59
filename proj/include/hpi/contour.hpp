#pragma once

// The open Peierls contour of a Dobrushin configuration and the geometric
// observables built on it.

#include <cstdint>
#include <span>
#include <vector>

#include "hpi/ground_state.hpp"
#include "hpi/lattice.hpp"

namespace hpi {

/// Vertex of the dual lattice; the dual vertex (x, y) is the centre of the
/// plaquette with spins at (x +- 1/2, y +- 1/2).
struct DualPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

/// The open contour from the left-boundary sign change at (0, 0) to the
/// other end of the interface, oriented with the plus phase on its left.
struct InterfacePath {
  std::vector<DualPoint> vertices;
  int n_columns = 0;

  std::int64_t length() const { return vertices.empty() ? 0 : static_cast<std::int64_t>(vertices.size()) - 1; }
  const DualPoint& end() const { return vertices.back(); }

  /// Height at the column centre s = c + 1/2 for c in [0, n_columns): the
  /// mean height of the horizontal path edges spanning [c, c + 1]. NaN for
  /// columns the path never crosses.
  std::vector<double> column_heights() const;
};

/// Traces the open contour. At a dual vertex with four contour edges the
/// path turns left (keeps the plus spin it is circling on its left), so
/// diagonal plus neighbours are separated. Closed loops are skipped.
InterfacePath extract_open_contour(const SpinLattice& lattice);

/// Staircase as a dual-lattice path from the origin.
InterfacePath staircase_path(const StaircasePath& staircase);

/// Lattice length of the shortest contour with the same endpoints.
std::int64_t ground_length(const InterfacePath& path);

struct CigarSpec {
  double d = 1.0;
  double kappa = 0.1;
  double r = 0.0;
  double theta = 0.0;
  int n = 1;

  void validate() const;
};

/// Every vertex lies in |y - x tan(theta)| <= d (x (N - x) / N)^(1/2 + kappa)
/// within the box [0, N] x [-N, N], or within R of (0, 0) or (N, N tan theta).
bool cigar_contains(const InterfacePath& path, const CigarSpec& spec);

struct ColumnMoments {
  double s = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
};

inline constexpr std::size_t kMinWidthPaths = 100;

/// Moments of h(s) - s tan(theta) over paths at the given columns, with
/// delete-one jackknife errors.
std::vector<ColumnMoments> width_statistics(std::span<const InterfacePath> paths, std::span<const int> columns,
                                            double theta);

/// |Y_{N,h}| / N for one wall-bound path from (0, 0) to (0, +-N): the share
/// of the N unit height intervals on which every vertical contour edge lies
/// farther than h from the wall x = 0.
double wall_fraction(const InterfacePath& path, int h);

/// Mean of wall_fraction over paths.
double wall_avoidance(std::span<const InterfacePath> paths, int h);

struct LengthTail {
  std::int64_t ground_length = 0;
  std::vector<std::int64_t> lengths;   ///< L = ground_length - 1, ...
  std::vector<double> tail_probability;  ///< P(|gamma| > L)
  double decay_rate = 0.0;             ///< -d ln P / dL; NaN if not fittable
};

/// Empirical tail of the contour length and its exponential decay rate,
/// fitted on points with P <= 0.9 and at least 10 exceedances.
LengthTail length_tail(std::span<const std::int64_t> lengths, std::int64_t ground_length);
LengthTail length_tail(std::span<const InterfacePath> paths, std::int64_t ground_length);

}  // namespace hpi
