#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace exemplar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `sparql-exemplar` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Line diff in unified style, without hunk headers.
std::string line_diff(const std::string& before, const std::string& after);

}  // namespace exemplar::cli
