#include "hpi/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "hpi/errors.hpp"
#include "hpi/stats.hpp"

namespace hpi {

namespace {

enum Dir { East = 0, North = 1, West = 2, South = 3 };
constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

// Dual edges of the window with their orientation (plus spin on the left).
// Spin (col, row) has corners (col, row - M) and (col + 1, row - M + 1).
class DualEdges {
 public:
  explicit DualEdges(const SpinLattice& lat)
      : lat_(lat),
        horizontal_used_(static_cast<std::size_t>(lat.n) * static_cast<std::size_t>(2 * lat.m + 1), false),
        vertical_used_(static_cast<std::size_t>(lat.n + 1) * static_cast<std::size_t>(2 * lat.m), false) {}

  bool on_boundary(DualPoint p) const { return p.x == 0 || p.x == lat_.n || p.y == -lat_.m || p.y == lat_.m; }

  // True if the edge leaving p in direction d exists, carries the given
  // orientation and has not been walked yet.
  bool available(DualPoint p, int d) const {
    const auto slot = edge_slot(p, d);
    if (!slot) return false;
    if (slot->horizontal ? horizontal_used_[slot->index] : vertical_used_[slot->index]) return false;
    return oriented(p, d);
  }

  void mark(DualPoint p, int d) {
    const auto slot = edge_slot(p, d);
    (slot->horizontal ? horizontal_used_ : vertical_used_)[slot->index] = true;
  }

 private:
  struct Slot {
    bool horizontal;
    std::size_t index;
  };

  std::optional<Slot> edge_slot(DualPoint p, int d) const {
    const int n = lat_.n, m = lat_.m;
    if (p.x < 0 || p.x > n || p.y < -m || p.y > m) return std::nullopt;
    switch (d) {
      case East:
        if (p.x > n - 1) return std::nullopt;
        return Slot{true, horizontal_index(p.x, p.y)};
      case West:
        if (p.x < 1) return std::nullopt;
        return Slot{true, horizontal_index(p.x - 1, p.y)};
      case North:
        if (p.y > m - 1) return std::nullopt;
        return Slot{false, vertical_index(p.x, p.y)};
      default:
        if (p.y < -m + 1) return std::nullopt;
        return Slot{false, vertical_index(p.x, p.y - 1)};
    }
  }

  std::size_t horizontal_index(int x, int y) const {
    return static_cast<std::size_t>(y + lat_.m) * static_cast<std::size_t>(lat_.n) + static_cast<std::size_t>(x);
  }
  std::size_t vertical_index(int x, int y) const {
    return static_cast<std::size_t>(y + lat_.m) * static_cast<std::size_t>(lat_.n + 1) + static_cast<std::size_t>(x);
  }

  bool oriented(DualPoint p, int d) const {
    const SpinGrid& g = lat_.grid;
    const int row = p.y + lat_.m;
    switch (d) {
      case East:
        return g.at(p.x, row) > 0 && g.at(p.x, row - 1) < 0;
      case West:
        return g.at(p.x - 1, row - 1) > 0 && g.at(p.x - 1, row) < 0;
      case North:
        return g.at(p.x - 1, row) > 0 && g.at(p.x, row) < 0;
      default:
        return g.at(p.x, row - 1) > 0 && g.at(p.x - 1, row - 1) < 0;
    }
  }

  const SpinLattice& lat_;
  std::vector<bool> horizontal_used_;
  std::vector<bool> vertical_used_;
};

}  // namespace

std::vector<double> InterfacePath::column_heights() const {
  std::vector<double> sum(static_cast<std::size_t>(std::max(n_columns, 0)), 0.0);
  std::vector<int> count(sum.size(), 0);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const DualPoint& a = vertices[i - 1];
    const DualPoint& b = vertices[i];
    if (a.y != b.y) continue;
    const int c = std::min(a.x, b.x);
    if (c < 0 || c >= n_columns) continue;
    sum[static_cast<std::size_t>(c)] += a.y;
    ++count[static_cast<std::size_t>(c)];
  }
  std::vector<double> h(sum.size());
  for (std::size_t c = 0; c < h.size(); ++c) {
    h[c] = count[c] > 0 ? sum[c] / count[c] : std::numeric_limits<double>::quiet_NaN();
  }
  return h;
}

InterfacePath extract_open_contour(const SpinLattice& lattice) {
  const SpinGrid& g = lattice.grid;
  if (g.width() != lattice.n || g.height() != 2 * lattice.m) {
    throw ExtractionError("grid extents do not match the lattice");
  }
  if (!(g.at(-1, lattice.m) > 0 && g.at(-1, lattice.m - 1) < 0)) {
    throw ExtractionError("left boundary carries no +/- sign change at the origin");
  }

  DualEdges edges(lattice);
  InterfacePath path;
  path.n_columns = lattice.n;
  DualPoint here{0, 0};
  path.vertices.push_back(here);
  int heading = East;
  for (;;) {
    int next = -1;
    for (int turn : {1, 0, 3}) {
      const int d = (heading + turn) % 4;
      if (edges.available(here, d)) {
        next = d;
        break;
      }
    }
    if (next < 0) break;
    edges.mark(here, next);
    here = DualPoint{here.x + kDx[next], here.y + kDy[next]};
    heading = next;
    path.vertices.push_back(here);
  }

  if (path.vertices.size() < 2 || here == DualPoint{0, 0} || !edges.on_boundary(here)) {
    std::ostringstream msg;
    msg << "open contour stops at interior or starting vertex (" << here.x << ", " << here.y << ")";
    throw ExtractionError(msg.str());
  }
  return path;
}

InterfacePath staircase_path(const StaircasePath& staircase) {
  InterfacePath path;
  DualPoint p{0, 0};
  path.vertices.push_back(p);
  // Along-axis steps are horizontal unless the staircase was sampled transposed.
  const int across = staircase.transposed ? East : North;
  const int along = staircase.transposed ? North : East;
  auto walk = [&](int d, std::int64_t count) {
    for (std::int64_t i = 0; i < count; ++i) {
      p = DualPoint{p.x + kDx[d], p.y + kDy[d]};
      path.vertices.push_back(p);
    }
  };
  for (std::int64_t inc : staircase.increments) {
    walk(across, inc);
    walk(along, 1);
  }
  walk(across, staircase.trailing);
  path.n_columns = p.x;
  return path;
}

std::int64_t ground_length(const InterfacePath& path) {
  if (path.vertices.empty()) return 0;
  const DualPoint& a = path.vertices.front();
  const DualPoint& b = path.vertices.back();
  return std::abs(static_cast<std::int64_t>(b.x) - a.x) + std::abs(static_cast<std::int64_t>(b.y) - a.y);
}

void CigarSpec::validate() const {
  if (!(d > 0.0)) throw DomainError("d", "cigar width amplitude must be positive", 0.0);
  if (!(kappa > 0.0 && kappa < 0.5)) throw DomainError("kappa", "exponent bump must lie in (0, 1/2)");
  if (!(r >= 0.0)) throw DomainError("R", "endpoint disk radius must be non-negative", 0.0);
  if (n < 1) throw DomainError("N", "width must be positive", 1.0);
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) throw DomainError("theta", "cigar needs |theta| < pi/2");
}

bool cigar_contains(const InterfacePath& path, const CigarSpec& spec) {
  spec.validate();
  const double n = spec.n;
  const double slope = std::tan(spec.theta);
  const double ex = n, ey = n * slope;
  const double r2 = spec.r * spec.r;
  for (const DualPoint& v : path.vertices) {
    const double x = v.x, y = v.y;
    if (x * x + y * y <= r2) continue;
    if ((x - ex) * (x - ex) + (y - ey) * (y - ey) <= r2) continue;
    if (x < 0.0 || x > n || std::abs(y) > n) return false;
    const double envelope = spec.d * std::pow(x * (n - x) / n, 0.5 + spec.kappa);
    if (std::abs(y - x * slope) > envelope + 1e-9) return false;  // tan() roundoff at the endpoints
  }
  return true;
}

std::vector<ColumnMoments> width_statistics(std::span<const InterfacePath> paths, std::span<const int> columns,
                                            double theta) {
  if (paths.size() < kMinWidthPaths) {
    std::ostringstream msg;
    msg << "width statistics need at least " << kMinWidthPaths << " paths, got " << paths.size();
    throw StatisticsError(msg.str());
  }
  const double slope = std::tan(theta);
  std::vector<std::vector<double>> heights;
  heights.reserve(paths.size());
  for (const InterfacePath& p : paths) heights.push_back(p.column_heights());

  std::vector<ColumnMoments> out;
  out.reserve(columns.size());
  std::vector<double> values(paths.size());
  for (int c : columns) {
    const double s = c + 0.5;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const auto& h = heights[i];
      if (c < 0 || static_cast<std::size_t>(c) >= h.size() || std::isnan(h[static_cast<std::size_t>(c)])) {
        std::ostringstream msg;
        msg << "path " << i << " does not cross column " << c;
        throw StatisticsError(msg.str());
      }
      values[i] = h[static_cast<std::size_t>(c)] - s * slope;
    }
    const MeanVariance mv = jackknife_mean_variance(values);
    out.push_back(ColumnMoments{s, mv.mean, mv.variance, mv.mean_stderr, mv.variance_stderr});
  }
  return out;
}

double wall_fraction(const InterfacePath& path, int h) {
  if (path.vertices.empty()) return 0.0;
  const int top = path.end().y;
  const int span = std::abs(top);
  if (span == 0) return 0.0;
  const int sign = top > 0 ? 1 : -1;
  // Distance from the wall over each unit height interval [j, j + 1]: the
  // smallest abscissa of a vertical contour edge spanning it.
  std::vector<int> distance(static_cast<std::size_t>(span), std::numeric_limits<int>::max());
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    const DualPoint& a = path.vertices[i - 1];
    const DualPoint& b = path.vertices[i];
    if (a.x != b.x) continue;
    const int j = std::min(a.y * sign, b.y * sign);
    if (j < 0 || j >= span) continue;
    auto& d = distance[static_cast<std::size_t>(j)];
    d = std::min(d, a.x);
  }
  int far = 0;
  for (int d : distance) far += (d != std::numeric_limits<int>::max() && d > h) ? 1 : 0;
  return static_cast<double>(far) / span;
}

double wall_avoidance(std::span<const InterfacePath> paths, int h) {
  if (paths.empty()) return 0.0;
  double sum = 0.0;
  for (const InterfacePath& p : paths) sum += wall_fraction(p, h);
  return sum / static_cast<double>(paths.size());
}

LengthTail length_tail(std::span<const std::int64_t> lengths, std::int64_t ground) {
  LengthTail tail;
  tail.ground_length = ground;
  tail.decay_rate = std::numeric_limits<double>::quiet_NaN();
  if (lengths.empty()) return tail;
  std::vector<std::int64_t> sorted(lengths.begin(), lengths.end());
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(sorted.size());
  std::vector<double> fit_l, fit_log_p;
  for (std::int64_t l = ground - 1; l < sorted.back(); ++l) {
    const auto above = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), l));
    const double p = static_cast<double>(above) / total;
    tail.lengths.push_back(l);
    tail.tail_probability.push_back(p);
    if (p <= 0.9 && above >= 10) {
      fit_l.push_back(static_cast<double>(l));
      fit_log_p.push_back(std::log(p));
    }
  }
  if (fit_l.size() >= 2) tail.decay_rate = -linear_fit(fit_l, fit_log_p).slope;
  return tail;
}

LengthTail length_tail(std::span<const InterfacePath> paths, std::int64_t ground) {
  std::vector<std::int64_t> lengths;
  lengths.reserve(paths.size());
  for (const InterfacePath& p : paths) lengths.push_back(p.length());
  return length_tail(lengths, ground);
}

}  // namespace hpi
