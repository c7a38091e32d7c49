#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynint::cli {

enum ExitCode { kOk = 0, kFail = 1, kConfigError = 2, kRuntimeError = 3 };

// Runs one command line (without the program name). Reports go to `out`
// unless --output is given; errors go to `err` as a JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynint::cli
