#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cater::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitInternal = 5;

// Runs the command line (args excludes the program name) and returns the exit
// code. Reports go to out, diagnostics to err.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cater::cli
