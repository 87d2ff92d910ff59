#pragma once

// Zero-temperature interfaces: staircase paths, exact binomial partition
// functions and minimal-length pairings of boundary sign changes.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hpi {

/// tan(theta) / (1 + tan(theta)) for theta in [0, pi/4].
double step_probability(double theta);

/// Monotone zero-temperature interface starting at the origin.
///
/// increments[c] is the number of vertical unit steps taken at abscissa c
/// before the horizontal step to c + 1; `trailing` vertical steps follow the
/// last horizontal step (at abscissa N). For theta in (pi/4, pi/2) the path is
/// sampled in swapped coordinates: `transposed` is set and increments count
/// horizontal steps per unit of vertical advance.
struct StaircasePath {
  double theta = 0.0;
  std::vector<std::int64_t> increments;
  std::int64_t trailing = 0;
  bool transposed = false;

  std::int64_t length() const;  ///< number of unit edges
};

/// i.i.d. Geometric(1 - p) column increments, p = step_probability(theta).
/// Deterministic in (theta, n, seed).
StaircasePath sample_staircase(double theta, std::int64_t n, std::uint64_t seed);

/// Uniform minimal path from (0,0) to (n, rise): a uniformly random
/// arrangement of n horizontal and `rise` vertical steps. This is the
/// finite-volume ground state with prescribed endpoints.
StaircasePath sample_staircase_bridge(std::int64_t n, std::int64_t rise, std::uint64_t seed);

/// Above this a + b, binomial_log switches from big integers to lgamma.
inline constexpr std::int64_t kExactBinomialLimit = 10000;

/// ln C(a + b, b).
double binomial_log(std::int64_t a, std::int64_t b);

/// ln C(a + b, b) from an exact big-integer evaluation, any size.
double binomial_log_exact(std::int64_t a, std::int64_t b);

/// Ratio of the probabilities that a uniform minimal path to (a, b), resp.
/// (a, bbar), passes through (m, n):
///   [C(a+b-m-n, b-n) / C(a+b, b)] / [C(a+bbar-m-n, bbar-n) / C(a+bbar, bbar)].
double binomial_cross_ratio(std::int64_t a, std::int64_t b, std::int64_t bbar,
                            std::int64_t m, std::int64_t n);

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

inline std::int64_t l1_distance(LatticePoint p, LatticePoint q) {
  return (p.x > q.x ? p.x - q.x : q.x - p.x) + (p.y > q.y ? p.y - q.y : q.y - p.y);
}

using IndexPair = std::pair<int, int>;

/// Boundary sign-change points and, once paired, the pairing into contours.
/// points[0] is the origin. Pairs are stored with first < second, sorted.
struct EndpointSet {
  std::vector<LatticePoint> points;
  std::vector<IndexPair> pairing;

  std::int64_t cost() const;  ///< sum of L1 pair distances
};

inline constexpr int kMaxExactPairs = 8;

/// Minimal-L1 perfect pairing by exhaustive enumeration of all (2k-1)!!
/// pairings; ties go to the lexicographically smallest sorted pair list.
EndpointSet ground_pairing(std::span<const LatticePoint> points);

/// True iff every segment not containing points[0] misses the box
/// {0 <= x <= N/4, |y| <= N/4}.
bool separation_predicate(const EndpointSet& paired, std::int64_t n);

struct OzFit {
  double coefficient = 0.0;  ///< slope against ln N
  double intercept = 0.0;
  double max_abs_residual = 0.0;
};

/// Least-squares slope of ln C(N + b, b) - N * h(b/N) against ln N with
/// b = round(N tan theta) and h the Stirling entropy per horizontal unit.
OzFit oz_coefficient_fit(double theta, std::span<const std::int64_t> n_list);

}  // namespace hpi
