#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wmt::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kNonConvergence = 2,
  kArgumentError = 3,
};

/// Entry point of the `wmt` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "lo:hi:step" (inclusive of hi up to rounding) or a single value.
/// Throws std::invalid_argument on malformed input or step <= 0.
std::vector<double> parse_range(const std::string& spec);

}  // namespace wmt::cli
