#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epicon::cli {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// Runs the command line `args` (program name excluded). CSV goes to
/// `--out` when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epicon::cli
