#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
// Every draw is a pure function of (seed, counter), so parallel consumers
// obtain the same stream regardless of scheduling.

#include <array>
#include <cstdint>

namespace hpi {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Keyed by a 64-bit seed; addressed by two 64-bit coordinates
/// (e.g. lattice cell and sweep index).
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr Philox4x32::Counter block(std::uint64_t a, std::uint64_t b) const {
    return Philox4x32::generate({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                                 static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)},
                                key_);
  }

  constexpr std::uint32_t u32(std::uint64_t a, std::uint64_t b) const { return block(a, b)[0]; }

  constexpr std::uint64_t u64(std::uint64_t a, std::uint64_t b) const {
    const auto r = block(a, b);
    return (std::uint64_t{r[1]} << 32) | r[0];
  }

  /// Uniform on (0, 1] with 53 random bits.
  constexpr double uniform_open0(std::uint64_t a, std::uint64_t b) const {
    return static_cast<double>((u64(a, b) >> 11) + 1) * 0x1.0p-53;
  }

 private:
  Philox4x32::Key key_;
};

}  // namespace hpi
