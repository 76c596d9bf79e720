#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geomedian::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// Parses `args` (without the program name) and runs one subcommand. Results
/// go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geomedian::cli
