#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace linsys::cli {

/// Exit codes: 0 success, 1 undecided or failed check, 2 input error.
inline constexpr int kOk = 0;
inline constexpr int kUnknown = 1;
inline constexpr int kInputError = 2;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace linsys::cli
