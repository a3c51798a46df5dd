// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string_view>

namespace slopscope::report {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,     // bad arguments or config, unknown rule id
  kExitInput = 2,     // unreadable root, not a repository, every panel repo failed
  kExitRules = 3,     // rule file failed validation
  kExitInternal = 4,  // unexpected failure
};

// Runs the tool. Reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Built-in starter rule set (YAML).
std::string_view starter_rules();

}  // namespace slopscope::report
