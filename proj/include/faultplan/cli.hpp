#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace faultplan {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 ok, 2 bad input, 3 computation failure. Output files are
/// written only when the whole command succeeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace faultplan
