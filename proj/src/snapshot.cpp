#include "hpi/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "hpi/errors.hpp"

namespace hpi {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::array<char, kSnapshotHeaderBytes>& buf, std::size_t offset, T value) {
  std::memcpy(buf.data() + offset, &value, sizeof(T));
}

template <typename T>
T get(const std::array<char, kSnapshotHeaderBytes>& buf, std::size_t offset) {
  T value;
  std::memcpy(&value, buf.data() + offset, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const SpinLattice& lattice, std::uint64_t sample_index) {
  std::array<char, kSnapshotHeaderBytes> header{};
  std::memcpy(header.data(), "HPIS", 4);
  put<std::uint32_t>(header, 4, kSnapshotVersion);
  put<std::uint32_t>(header, 8, static_cast<std::uint32_t>(lattice.n));
  put<std::uint32_t>(header, 12, static_cast<std::uint32_t>(lattice.m));
  put<std::uint64_t>(header, 16, sample_index);
  put<double>(header, 24, lattice.theta);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  std::vector<char> row(static_cast<std::size_t>(lattice.n));
  for (int r = 0; r < 2 * lattice.m; ++r) {
    for (int c = 0; c < lattice.n; ++c) row[static_cast<std::size_t>(c)] = static_cast<char>(lattice.grid.at(c, r));
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

std::vector<Snapshot> read_snapshots(std::istream& in) {
  std::vector<Snapshot> frames;
  std::array<char, kSnapshotHeaderBytes> header{};
  for (;;) {
    in.read(header.data(), static_cast<std::streamsize>(header.size()));
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != static_cast<std::streamsize>(header.size())) throw SnapshotError("truncated snapshot header");
    if (std::memcmp(header.data(), "HPIS", 4) != 0) throw SnapshotError("bad snapshot magic");
    if (get<std::uint32_t>(header, 4) != kSnapshotVersion) throw SnapshotError("unsupported snapshot version");
    const auto n = get<std::uint32_t>(header, 8);
    const auto m = get<std::uint32_t>(header, 12);
    if (n == 0 || m == 0 || n > (1u << 20) || m > (1u << 20)) throw SnapshotError("implausible snapshot extents");

    Snapshot snap;
    snap.sample_index = get<std::uint64_t>(header, 16);
    try {
      snap.lattice = build_boundary(get<double>(header, 24), static_cast<int>(n), static_cast<int>(m));
    } catch (const ConfigError& e) {
      throw SnapshotError(std::string("snapshot header describes an invalid lattice: ") + e.what());
    }
    std::vector<char> row(n);
    for (std::uint32_t r = 0; r < 2 * m; ++r) {
      in.read(row.data(), static_cast<std::streamsize>(n));
      if (in.gcount() != static_cast<std::streamsize>(n)) throw SnapshotError("truncated snapshot body");
      for (std::uint32_t c = 0; c < n; ++c) {
        const auto s = static_cast<Spin>(row[c]);
        if (s != 1 && s != -1) throw SnapshotError("snapshot spin is not +-1");
        snap.lattice.grid.at(static_cast<int>(c), static_cast<int>(r)) = s;
      }
    }
    frames.push_back(std::move(snap));
  }
  return frames;
}

std::vector<Snapshot> read_snapshot_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot file " + path.string());
  return read_snapshots(in);
}

std::vector<Snapshot> read_snapshot_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw SnapshotError("snapshot directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".bin") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Snapshot> all;
  for (const auto& f : files) {
    auto frames = read_snapshot_file(f);
    std::move(frames.begin(), frames.end(), std::back_inserter(all));
  }
  if (all.empty()) throw SnapshotError("no snapshot frames in " + dir.string());
  return all;
}

}  // namespace hpi
