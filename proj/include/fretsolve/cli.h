/**
 * @file cli.h
 * @brief `fretsolve` command line: optimize, analyze, retune, serve.
 *
 * Exit codes: 0 ok, 1 parse error or unreadable file, 2 infeasible or
 * unresolvable, 64 usage.
 */

#pragma once

#include <ostream>

namespace fretsolve {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 64;

inline constexpr int kDefaultPort = 8080;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fretsolve
