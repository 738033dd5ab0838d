#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace schwarz {

/// Runs one command line (without the program name), writing the report to
/// `out` and diagnostics to `err`. Exit codes: 0 success (FAIL verdicts are
/// data), 1 internal error or failed selftest, 2 usage error, 3 precondition
/// error (NotNormal, critical point, pole, ...).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schwarz
