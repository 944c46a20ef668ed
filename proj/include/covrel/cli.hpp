#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace covrel::cli {

/// Runs the command line (arguments without the program name).
/// Exit codes: 0 verified or completed, 1 not verified, 2 usage or
/// evaluation error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace covrel::cli
