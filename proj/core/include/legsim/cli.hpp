#pragma once

#include <string>
#include <vector>

namespace legsim {

// Command-line front end: subcommands validate / sweep / simulate / torque
// with flags --config, --out, --csv, --svg, --cycles. Returns the process
// exit code: 0 success, 1 input error, 2 runtime failure. Errors go to the
// diagnostic stream as a single `error: <input|runtime>: <message>` line.
int run_cli(const std::vector<std::string>& args);

}  // namespace legsim
