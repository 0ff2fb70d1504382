#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fractal_tube::cli {

/// Exit codes: 0 success, 2 usage or parse error, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line front end; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fractal_tube::cli
