#pragma once

#include <string>
#include <vector>

namespace flr {

// Runs one CLI invocation; `args` excludes the program name.
// Exit codes: 0 success, 1 failed verification or check, 2 usage errors.
int run(const std::vector<std::string>& args);

}  // namespace flr
