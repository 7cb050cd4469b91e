#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tankest::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitOracleMismatch = 4;
inline constexpr int kExitOracleCapacity = 5;

/// Runs the tool. `args` excludes the program name. Results go to `out`,
/// diagnostics and progress to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace tankest::cli
