#pragma once

// Batch front end. run() parses arguments, executes one subcommand and
// returns the process exit code:
//   0  every expectation met
//   1  unexpected violation, failed reproduction or output failure
//   2  usage or input error

#include <iosfwd>
#include <string>
#include <vector>

namespace rgl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:step", inclusive of stop up to rounding. Throws ValidationError.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace rgl::cli
