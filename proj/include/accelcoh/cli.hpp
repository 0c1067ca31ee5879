#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace accelcoh::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Diagnostics go to err, tabular output to out unless --output
/// names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Quick invariant suite behind the `selftest` subcommand. Prints one line
/// per check and returns true when all pass.
bool selftest(std::ostream& out);

}  // namespace accelcoh::cli
