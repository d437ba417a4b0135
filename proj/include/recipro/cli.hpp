#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace recipro::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kInputError = 2, kBudgetExceeded = 3 };

// args exclude the program name; errors are reported on `err` as one JSON line
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recipro::cli
