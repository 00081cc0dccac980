#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace aeqnd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name. Diagnostics go to err, tables to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aeqnd::cli
