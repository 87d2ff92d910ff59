#include "hpi/metropolis.hpp"

#include <cmath>

namespace hpi {

AcceptanceTable::AcceptanceTable(const Couplings& c) {
  constexpr double kScale = 4294967296.0;  // 2^32
  for (int spin : {-1, 1}) {
    for (int h1 : {-2, 0, 2}) {
      for (int h2 : {-2, 0, 2}) {
        const double delta_e = 2.0 * spin * (c.k1 * h1 + c.k2 * h2);
        const double p = delta_e <= 0.0 ? 1.0 : std::exp(-delta_e);
        const auto slot = static_cast<std::size_t>((spin > 0 ? 9 : 0) + (h1 / 2 + 1) * 3 + (h2 / 2 + 1));
        table_[slot] = p >= 1.0 ? std::uint64_t{1} << 32 : static_cast<std::uint64_t>(p * kScale);
      }
    }
  }
}

namespace {

// Updates every cell of one colour in a single row; returns accepted flips.
// One Philox block serves four consecutive same-colour cells: counter
// (row, group) and (sweep, colour).
inline std::uint64_t update_row(Spin* cells, int width, int row, int colour, const AcceptanceTable& acceptance,
                                const CounterRng& rng, std::uint64_t sweep_index) {
  const std::ptrdiff_t stride = width + 2;
  Spin* line = cells + (row + 1) * stride + 1;
  const std::uint64_t b = sweep_index * 2 + static_cast<std::uint64_t>(colour);
  std::uint64_t accepted = 0;
  Philox4x32::Counter draws{};
  int lane = 4;
  std::uint64_t group = 0;
  for (int col = (row + colour) & 1; col < width; col += 2) {
    if (lane == 4) {
      draws = rng.block((static_cast<std::uint64_t>(row) << 32) | group++, b);
      lane = 0;
    }
    Spin* cell = line + col;
    const int spin = *cell;
    const int h1 = cell[-1] + cell[1];
    const int h2 = cell[-stride] + cell[stride];
    if (draws[static_cast<std::size_t>(lane++)] < acceptance.threshold(spin, h1, h2)) {
      *cell = static_cast<Spin>(-spin);
      ++accepted;
    }
  }
  return accepted;
}

}  // namespace

SweepStats sweep_reference(SpinGrid& grid, const AcceptanceTable& acceptance, const CounterRng& rng,
                           std::uint64_t sweep_index) {
  Spin* cells = grid.cells().data();
  const int width = grid.width();
  const int height = grid.height();
  SweepStats stats;
  for (int colour = 0; colour < 2; ++colour) {
    for (int row = 0; row < height; ++row) {
      stats.accepted += update_row(cells, width, row, colour, acceptance, rng, sweep_index);
    }
  }
  stats.attempted = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  return stats;
}

SweepStats sweep_parallel(SpinGrid& grid, const AcceptanceTable& acceptance, const CounterRng& rng,
                          std::uint64_t sweep_index, int threads) {
  Spin* cells = grid.cells().data();
  const int width = grid.width();
  const int height = grid.height();
  std::uint64_t accepted = 0;
  for (int colour = 0; colour < 2; ++colour) {
#pragma omp parallel for schedule(static) reduction(+ : accepted) num_threads(threads)
    for (int row = 0; row < height; ++row) {
      accepted += update_row(cells, width, row, colour, acceptance, rng, sweep_index);
    }
  }
  SweepStats stats;
  stats.accepted = accepted;
  stats.attempted = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  return stats;
}

}  // namespace hpi
