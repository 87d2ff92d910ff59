#pragma once

// Binary spin snapshots. Each frame is a 32-byte little-endian header
//   0  char[4] "HPIS"
//   4  u32     format version (1)
//   8  u32     N
//  12  u32     M
//  16  u64     sample index
//  24  f64     theta
// followed by N * 2M int8 spins, row-major from the bottom row up.
// Frames are concatenated in one file.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hpi/lattice.hpp"

namespace hpi {

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

struct Snapshot {
  std::uint64_t sample_index = 0;
  SpinLattice lattice;
};

void write_snapshot(std::ostream& out, const SpinLattice& lattice, std::uint64_t sample_index);

/// All frames of one stream; the frozen frame is rebuilt from theta.
/// SnapshotError on a bad magic, version, truncation or non +-1 spin.
std::vector<Snapshot> read_snapshots(std::istream& in);
std::vector<Snapshot> read_snapshot_file(const std::filesystem::path& path);

/// Every *.bin file of a directory in name order. SnapshotError if the
/// directory is missing or holds no frames.
std::vector<Snapshot> read_snapshot_dir(const std::filesystem::path& dir);

}  // namespace hpi
