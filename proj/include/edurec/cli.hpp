#pragma once

#include <iosfwd>

namespace edurec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Subcommands: generate, train, evaluate, compare, serve, quiz.
// Data goes to `out` (or named files), diagnostics to `err`; `in` feeds the
// interactive quiz.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace edurec::cli
