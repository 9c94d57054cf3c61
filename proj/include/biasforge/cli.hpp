#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace biasforge {

/// Runs the command line front end. Returns 0 on success, 2 on a validation
/// failure (error JSON written to err), 1 on an internal error or a failed
/// verification suite.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace biasforge
