#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modalgrid::cli {

// Runs one workbench command (the argument list excludes the program name).
// Exit codes: 0 success / positive result, 1 negative result, 2 error or abort.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modalgrid::cli
