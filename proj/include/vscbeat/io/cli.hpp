#pragma once

#include <iosfwd>

namespace vscbeat::io {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerificationFailed = 3;

/// Subcommands: derive, simulate, sweep, phase-space, verify, figures.
/// The default output directory comes from VSCBEAT_OUTPUT_DIR when no flag or
/// config value sets one.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace vscbeat::io
