#pragma once

// The `hpi` command line: tension, profile, simulate, groundstate, analyze.
//
// Exit codes: 0 success, 1 internal failure, 2 invalid parameter or domain
// error, 3 interface escaped the window too often, 4 unreadable snapshots.

#include <iosfwd>
#include <string>
#include <vector>

namespace hpi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitEscape = 3;
inline constexpr int kExitSnapshot = 4;

/// args excludes the program name. HPI_REFERENCE_MODE=1 in the environment
/// selects the single-threaded reference kernel.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpi
