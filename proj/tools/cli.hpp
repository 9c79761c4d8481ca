#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rcov::cli {

// Runs one command line (without the program name). Returns the exit code:
// 0 success, 1 a check failed, 2 validation error, 3 unsupported input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Name of the environment variable holding the default normalization.
inline constexpr const char* kNormalizationEnv = "RCOV_NORMALIZATION";

}  // namespace rcov::cli
