#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fopa::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;  // diagnostics, invalid values, failed oracle
inline constexpr int kUsageError = 2;   // bad flags, unreadable files

/// Runs the `fopa` command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fopa::cli
