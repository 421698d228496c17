#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace arbor::cli {

inline constexpr unsigned long long kDefaultSeed = 20240613;

enum ExitCode : int { kOk = 0, kValidationError = 1, kComputationError = 2, kVerificationFailure = 3 };

/// Entry point shared by the `arbor` executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "x", "a:b" (grid points), "a:b:n", or "x1,x2,...". Throws std::invalid_argument.
std::vector<double> parse_range(const std::string& text, std::size_t grid);

}  // namespace arbor::cli
