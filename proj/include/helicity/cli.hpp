/// @file cli.hpp
/// @brief Batch front-end: one subcommand per experiment, JSON config in,
/// JSON or CSV table out.
///
/// Exit codes: 0 success, 2 configuration error (including unknown
/// subcommands and unreadable files), 3 numerical gate failure.
#pragma once

#include <iosfwd>

namespace helicity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitGate = 3;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace helicity::cli
