#include "hpi/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "hpi/errors.hpp"
#include "hpi/philox.hpp"

namespace hpi {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

using BigInt = boost::multiprecision::cpp_int;

BigInt big_binomial(std::int64_t n, std::int64_t k) {
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= static_cast<std::uint64_t>(n - k + i);
    result /= static_cast<std::uint64_t>(i);
  }
  return result;
}

// ln of a positive big integer: keep the top 64 bits and add the shift.
double big_log(const BigInt& v) {
  const std::size_t bits = boost::multiprecision::msb(v) + 1;
  if (bits <= 64) return std::log(static_cast<double>(static_cast<std::uint64_t>(v)));
  const std::size_t shift = bits - 64;
  const auto top = static_cast<std::uint64_t>(v >> shift);
  return std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::numbers::ln2;
}

void require_nonnegative(std::int64_t v, const char* name) {
  if (v < 0) throw DomainError(name, "must be non-negative");
}

}  // namespace

double step_probability(double theta) {
  if (!(theta >= 0.0 && theta <= kQuarterPi)) {
    throw DomainError("theta", "step probability is defined on [0, pi/4]; swap axes beyond pi/4");
  }
  const double t = std::tan(theta);
  return t / (1.0 + t);
}

std::int64_t StaircasePath::length() const {
  return static_cast<std::int64_t>(increments.size()) + trailing +
         std::accumulate(increments.begin(), increments.end(), std::int64_t{0});
}

StaircasePath sample_staircase(double theta, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("N", "path length must be at least 1");
  if (!(theta >= 0.0 && theta < kHalfPi)) throw DomainError("theta", "staircase angle must lie in [0, pi/2)");

  StaircasePath path;
  path.theta = theta;
  path.transposed = theta > kQuarterPi;
  const double p = step_probability(path.transposed ? kHalfPi - theta : theta);
  path.increments.assign(static_cast<std::size_t>(n), 0);
  if (p == 0.0) return path;

  // Inverse CDF: P(K >= k) = p^k.
  const CounterRng rng(seed);
  const double log_p = std::log(p);
  for (std::int64_t c = 0; c < n; ++c) {
    const double u = rng.uniform_open0(static_cast<std::uint64_t>(c), 0);
    path.increments[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::floor(std::log(u) / log_p));
  }
  return path;
}

StaircasePath sample_staircase_bridge(std::int64_t n, std::int64_t rise, std::uint64_t seed) {
  if (n < 1) throw DomainError("N", "path length must be at least 1");
  require_nonnegative(rise, "rise");

  // Sequential uniform choice of step positions: the next step is vertical
  // with probability (vertical left) / (steps left).
  const CounterRng rng(seed);
  StaircasePath path;
  path.theta = std::atan2(static_cast<double>(rise), static_cast<double>(n));
  path.increments.assign(static_cast<std::size_t>(n), 0);
  std::int64_t horizontal_left = n;
  std::int64_t vertical_left = rise;
  std::uint64_t draw = 0;
  while (horizontal_left > 0) {
    const std::uint64_t total = static_cast<std::uint64_t>(horizontal_left + vertical_left);
    const std::uint64_t pick = rng.u64(draw++, 1) % total;
    if (pick < static_cast<std::uint64_t>(vertical_left)) {
      ++path.increments[static_cast<std::size_t>(n - horizontal_left)];
      --vertical_left;
    } else {
      --horizontal_left;
    }
  }
  path.trailing = vertical_left;
  return path;
}

double binomial_log_exact(std::int64_t a, std::int64_t b) {
  require_nonnegative(a, "a");
  require_nonnegative(b, "b");
  if (a == 0 || b == 0) return 0.0;
  return big_log(big_binomial(a + b, b));
}

double binomial_log(std::int64_t a, std::int64_t b) {
  require_nonnegative(a, "a");
  require_nonnegative(b, "b");
  if (a + b <= kExactBinomialLimit) return binomial_log_exact(a, b);
  const auto n = static_cast<double>(a + b);
  return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(a) + 1.0) -
         std::lgamma(static_cast<double>(b) + 1.0);
}

double binomial_cross_ratio(std::int64_t a, std::int64_t b, std::int64_t bbar, std::int64_t m,
                            std::int64_t n) {
  require_nonnegative(m, "m");
  require_nonnegative(n, "n");
  if (a < m) throw DomainError("a", "must be at least m");
  if (b < n) throw DomainError("b", "must be at least n");
  if (bbar < n) throw DomainError("bbar", "must be at least n");
  if (b == bbar) return 1.0;
  const double log_ratio = (binomial_log(a - m, b - n) - binomial_log(a, b)) -
                           (binomial_log(a - m, bbar - n) - binomial_log(a, bbar));
  return std::exp(log_ratio);
}

std::int64_t EndpointSet::cost() const {
  std::int64_t total = 0;
  for (const auto& [i, j] : pairing) {
    total += l1_distance(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
  }
  return total;
}

namespace {

// Depth-first enumeration: always pair the lowest unpaired index first, with
// partners in increasing order. The resulting pair lists come out in
// lexicographic order, so a strict `<` keeps the lexicographic minimum on ties.
struct PairingSearch {
  std::span<const LatticePoint> points;
  std::vector<IndexPair> current;
  std::vector<IndexPair> best;
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::uint32_t used = 0;

  void run(std::int64_t cost) {
    if (!best.empty() && cost >= best_cost) return;
    int first = 0;
    const int size = static_cast<int>(points.size());
    while (first < size && (used >> first & 1u)) ++first;
    if (first == size) {
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
      }
      return;
    }
    used |= 1u << first;
    for (int j = first + 1; j < size; ++j) {
      if (used >> j & 1u) continue;
      used |= 1u << j;
      current.emplace_back(first, j);
      run(cost + l1_distance(points[static_cast<std::size_t>(first)], points[static_cast<std::size_t>(j)]));
      current.pop_back();
      used &= ~(1u << j);
    }
    used &= ~(1u << first);
  }
};

// Segment [p, q] against the closed box [x0, x1] x [y0, y1] (Liang-Barsky).
bool segment_meets_box(LatticePoint p, LatticePoint q, double x0, double x1, double y0, double y1) {
  double t0 = 0.0;
  double t1 = 1.0;
  const double dx = static_cast<double>(q.x - p.x);
  const double dy = static_cast<double>(q.y - p.y);
  const double px = static_cast<double>(p.x);
  const double py = static_cast<double>(p.y);
  const std::array<std::pair<double, double>, 4> edges{{{-dx, px - x0}, {dx, x1 - px}, {-dy, py - y0}, {dy, y1 - py}}};
  for (const auto& [denom, num] : edges) {
    if (denom == 0.0) {
      if (num < 0.0) return false;
    } else if (denom < 0.0) {
      t0 = std::max(t0, num / denom);
    } else {
      t1 = std::min(t1, num / denom);
    }
  }
  return t0 <= t1;
}

}  // namespace

EndpointSet ground_pairing(std::span<const LatticePoint> points) {
  if (points.size() % 2 != 0) throw DomainError("points", "an even number of endpoints is required");
  if (points.empty()) throw DomainError("points", "at least one pair is required");
  if (points.size() > 2 * kMaxExactPairs) throw DomainError("points", "exact pairing supports at most 8 pairs");

  PairingSearch search{points, {}, {}, std::numeric_limits<std::int64_t>::max(), 0};
  search.current.reserve(points.size() / 2);
  search.run(0);

  EndpointSet out;
  out.points.assign(points.begin(), points.end());
  out.pairing = std::move(search.best);
  return out;
}

bool separation_predicate(const EndpointSet& paired, std::int64_t n) {
  const double quarter = static_cast<double>(n) / 4.0;
  for (const auto& [i, j] : paired.pairing) {
    if (i == 0 || j == 0) continue;
    if (segment_meets_box(paired.points[static_cast<std::size_t>(i)], paired.points[static_cast<std::size_t>(j)], 0.0,
                          quarter, -quarter, quarter)) {
      return false;
    }
  }
  return true;
}

OzFit oz_coefficient_fit(double theta, std::span<const std::int64_t> n_list) {
  if (!(theta > 0.0 && theta <= kQuarterPi)) throw DomainError("theta", "OZ fit needs theta in (0, pi/4]");
  if (n_list.size() < 3) throw NumericalError("oz_coefficient_fit: at least three lengths are needed");

  std::vector<double> xs;
  std::vector<double> ys;
  for (const std::int64_t n : n_list) {
    if (n < 1) throw DomainError("N", "lengths must be positive");
    const auto rise = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * std::tan(theta)));
    if (rise < 1) throw DomainError("N", "length too small for a non-flat staircase");
    // Entropy per horizontal unit at the realized slope r = rise / n.
    const double r = static_cast<double>(rise) / static_cast<double>(n);
    const double rate = (1.0 + r) * std::log1p(r) - r * std::log(r);
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(binomial_log_exact(n, rise) - static_cast<double>(n) * rate);
  }

  const double nx = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / nx;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / nx;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw NumericalError("oz_coefficient_fit: lengths do not vary");

  OzFit fit;
  fit.coefficient = sxy / sxx;
  fit.intercept = my - fit.coefficient * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(ys[i] - fit.intercept - fit.coefficient * xs[i]));
  }
  return fit;
}

}  // namespace hpi
