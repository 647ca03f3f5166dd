#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lgre::cli {

enum Exit { ok = 0, no_expression = 1, usage = 2 };

/// Runs one command line; `args` excludes the program name. Results go to
/// `out`, diagnostics and traces to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lgre::cli
