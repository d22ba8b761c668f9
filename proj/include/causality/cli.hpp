#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causality {

// Runs the command line `args` (program name excluded). Payload goes to
// `out`, diagnostics to `err`. Returns 0 on success, 1 on data or model
// errors, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causality
