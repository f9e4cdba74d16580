#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hilb::cli {

/// Exit codes: 0 every audit matched its expectation, 1 an audit or validation
/// did not, 2 usage error (bad flag, unknown token, weight cap), 3 I/O or internal error.
enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kFailure = 3 };

/// Runs the `hilb` command line. args excludes the program name; "-" as an input path reads `in`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hilb::cli
