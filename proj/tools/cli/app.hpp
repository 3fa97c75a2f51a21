#pragma once

#include <iosfwd>

namespace mmgsep::cli {

inline constexpr const char* kToolName = "mmgsep";
inline constexpr const char* kToolVersion = "0.1.0";

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

// Parses argv and runs one subcommand. Diagnostics go to `err`, the one-line
// JSON completion summary to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmgsep::cli
