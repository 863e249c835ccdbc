#pragma once

#include <ostream>

namespace qfelab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

// Parses argv, runs one subcommand and writes its result file. Returns the exit status.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfelab::cli
