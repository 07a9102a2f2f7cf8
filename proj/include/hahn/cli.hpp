#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hahn::cli {

/// Runs the batch front end. Results and machine-readable error bodies go to
/// `out`; CLI11 help text goes to `err`. Exit codes: 0 success, 2 parse
/// errors, 3 domain errors, 4 internal bugs, 1 selftest failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace hahn::cli
