#pragma once

// pde-ident command line: stencil, analyze, sweep, plot.
//
// Exit codes: 0 success, 1 usage error, 2 runtime or case failure.

#include <iosfwd>

namespace pdeid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// Parses argv and dispatches. Output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pdeid::cli
