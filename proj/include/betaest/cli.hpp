#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betaest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

/// Runs the command line `args` (args[0] is the program name). CSV goes to
/// `out` unless --output is given; diagnostics go to `err` as a single line.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "a,b,c" or "start:stop:step" (inclusive of stop up to rounding).
/// Throws std::invalid_argument on malformed input.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace betaest::cli
