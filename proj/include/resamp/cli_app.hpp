#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resamp {

/// Runs the command-line front end. Reports go to `out`, diagnostics to
/// `err`. Returns 0 on success, 1 on input errors, 2 on numerical
/// degeneracy.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resamp
