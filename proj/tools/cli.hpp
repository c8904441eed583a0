#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clickbait::cli {

// Runs the `clickbait` tool. `args[0]` is the program name. Data goes to
// files or `out`, diagnostics to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace clickbait::cli
