#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace futs::cli {

/// Runs one command. `args` excludes the program name. Returns the exit code:
/// 0 success (or bisimilar), 1 not bisimilar / failed checks, 2 input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace futs::cli
