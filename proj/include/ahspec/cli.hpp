#pragma once

// Command-line front end. Subcommands: classify, predict, refine, scan,
// winding, check-watson, profile. Exit status 0 on success, 1 on invalid
// input, 2 on numeric failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace ahspec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumeric = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ahspec
