#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sosb::cli {

// Runs one subcommand. Results go to `out` (or the --out file) as JSON,
// diagnostics to `err`. Returns 0 on success, 1 on domain errors, 2 on
// usage errors.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sosb::cli
