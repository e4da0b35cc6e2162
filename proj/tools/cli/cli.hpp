#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dysoncli {

/// Runs the dysonlab command line. args[0] is the program name.
/// Returns 0 on success, 1 on a runtime failure, 2 on invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dysoncli
