#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steerkit::cli {

inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_VERIFY_FAILED = 1;
inline constexpr int EXIT_USAGE = 2;

/// Runs the command line (args excludes the program name). Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steerkit::cli
