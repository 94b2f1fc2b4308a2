#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace heatnorm::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;

/// Runs the command-line front end. `args` excludes the program name.
/// Results go to `out` (or the --out file); diagnostics and, for JSON
/// written to `out`, the run manifest go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heatnorm::cli
