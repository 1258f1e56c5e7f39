#pragma once

// End-to-end verification suite.  Each check prints one [PASS]/[FAIL] line
// with a short numeric summary; the return value is the number of failed
// checks (0 when the build is healthy).  The same suite backs the CLI
// `verify` subcommand and the standalone verification binary.

#include <ostream>

namespace ccf {

int run_verification(std::ostream& out);

}  // namespace ccf
