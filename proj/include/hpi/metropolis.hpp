#pragma once

// Checkerboard single-spin-flip Metropolis for the anisotropic Ising model
// H = -k1 sum_horizontal s s' - k2 sum_vertical s s'.
//
// Two kernels share one update rule: a serial reference loop and an OpenMP
// loop over rows. Random numbers are addressed by (row, cell group, sweep,
// colour), so both kernels produce bit-identical lattices for any thread
// count.

#include <array>
#include <cstdint>

#include "hpi/exact_solution.hpp"
#include "hpi/lattice.hpp"
#include "hpi/philox.hpp"

namespace hpi {

/// Acceptance probabilities min(1, exp(-dE)) as 32-bit fixed-point
/// thresholds: a flip is accepted iff a uniform 32-bit draw is below.
class AcceptanceTable {
 public:
  explicit AcceptanceTable(const Couplings& c);

  /// spin: current value; h1: left + right neighbours; h2: up + down.
  std::uint64_t threshold(int spin, int h1, int h2) const noexcept {
    return table_[static_cast<std::size_t>((spin > 0 ? 9 : 0) + (h1 / 2 + 1) * 3 + (h2 / 2 + 1))];
  }

 private:
  std::array<std::uint64_t, 18> table_{};
};

struct SweepStats {
  std::uint64_t attempted = 0;
  std::uint64_t accepted = 0;
};

enum class KernelMode { Reference, Parallel };

/// One sweep: the even sublattice (col + row even), then the odd one.
SweepStats sweep_reference(SpinGrid& grid, const AcceptanceTable& acceptance, const CounterRng& rng,
                           std::uint64_t sweep_index);

SweepStats sweep_parallel(SpinGrid& grid, const AcceptanceTable& acceptance, const CounterRng& rng,
                          std::uint64_t sweep_index, int threads);

inline SweepStats metropolis_sweep(SpinGrid& grid, const AcceptanceTable& acceptance, const CounterRng& rng,
                                   std::uint64_t sweep_index, KernelMode mode, int threads = 1) {
  return mode == KernelMode::Reference ? sweep_reference(grid, acceptance, rng, sweep_index)
                                       : sweep_parallel(grid, acceptance, rng, sweep_index, threads);
}

}  // namespace hpi
