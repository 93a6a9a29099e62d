#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phasekit {

/// Runs the command line `args` (without the program name). Writes one JSON
/// document or CSV table to `out` and diagnostics to `err`. Returns 0 on
/// success, 1 on a domain error and 2 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasekit
