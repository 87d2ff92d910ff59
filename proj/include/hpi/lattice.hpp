#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hpi {

using Spin = std::int8_t;

/// width x height interior spins surrounded by a one-cell frozen frame.
/// Columns run over [-1, width], rows over [-1, height]; the frame cells are
/// never touched by the dynamics.
class SpinGrid {
 public:
  SpinGrid() = default;
  SpinGrid(int width, int height, Spin fill = 1);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int stride() const noexcept { return width_ + 2; }

  std::size_t index(int col, int row) const noexcept {
    return static_cast<std::size_t>(row + 1) * static_cast<std::size_t>(stride()) + static_cast<std::size_t>(col + 1);
  }
  Spin at(int col, int row) const noexcept { return cells_[index(col, row)]; }
  Spin& at(int col, int row) noexcept { return cells_[index(col, row)]; }

  bool is_interior(int col, int row) const noexcept {
    return col >= 0 && col < width_ && row >= 0 && row < height_;
  }

  std::span<const Spin> cells() const noexcept { return cells_; }
  std::span<Spin> cells() noexcept { return cells_; }

  friend bool operator==(const SpinGrid&, const SpinGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Spin> cells_;
};

/// The strip 0 < s < N, |t| < M with Dobrushin data on its frame: sigma^+-
/// on the left column, sigma^theta on the right column and on the clamp rows
/// above and below. Spin (col, row) sits at s = col + 1/2, t = row - M + 1/2.
struct SpinLattice {
  int n = 0;
  int m = 0;
  double theta = 0.0;
  SpinGrid grid;

  double s_of(int col) const noexcept { return col + 0.5; }
  double t_of(int row) const noexcept { return row - m + 0.5; }

  friend bool operator==(const SpinLattice&, const SpinLattice&) = default;
};

/// +1 above the axis, -1 below (left boundary column).
Spin sigma_pm(double t);

/// +1 iff t / s >= tan(theta), s > 0. theta = +pi/2 gives -1 everywhere and
/// theta = -pi/2 gives +1 everywhere.
Spin sigma_theta(double s, double t, double theta);

/// Frame from the boundary conditions, interior initialized to sigma^theta.
/// ConfigError if the right-edge sign change does not fit in the window.
SpinLattice build_boundary(double theta, int n, int m);

/// True when |theta| is pi/2 up to rounding.
bool is_vertical(double theta);

}  // namespace hpi
