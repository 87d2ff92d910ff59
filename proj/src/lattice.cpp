#include "hpi/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hpi/errors.hpp"

namespace hpi {

SpinGrid::SpinGrid(int width, int height, Spin fill)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width + 2) * static_cast<std::size_t>(height + 2), fill) {}

bool is_vertical(double theta) {
  return std::abs(std::abs(theta) - std::numbers::pi / 2.0) < 1e-12;
}

Spin sigma_pm(double t) { return t > 0.0 ? Spin{1} : Spin{-1}; }

Spin sigma_theta(double s, double t, double theta) {
  if (is_vertical(theta)) return theta > 0.0 ? Spin{-1} : Spin{1};
  return t / s >= std::tan(theta) ? Spin{1} : Spin{-1};
}

SpinLattice build_boundary(double theta, int n, int m) {
  if (n < 1 || m < 1) throw ConfigError("lattice extents N and M must be positive");
  if (!std::isfinite(theta) || std::abs(theta) > std::numbers::pi / 2.0 + 1e-12) {
    throw ConfigError("theta must lie in [-pi/2, pi/2]");
  }
  if (!is_vertical(theta)) {
    const double crossing = (n + 0.5) * std::tan(theta);
    if (!(crossing > -m + 0.5 && crossing <= m - 0.5)) {
      std::ostringstream msg;
      msg << "M = " << m << " is too small: the interface reaches the right edge at height " << crossing;
      throw ConfigError(msg.str());
    }
  }

  SpinLattice lat;
  lat.n = n;
  lat.m = m;
  lat.theta = theta;
  lat.grid = SpinGrid(n, 2 * m);
  SpinGrid& g = lat.grid;
  for (int row = -1; row <= 2 * m; ++row) {
    const double t = lat.t_of(row);
    g.at(-1, row) = sigma_pm(t);
    for (int col = 0; col <= n; ++col) g.at(col, row) = sigma_theta(lat.s_of(col), t, theta);
  }
  return lat;
}

}  // namespace hpi
