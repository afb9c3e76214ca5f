#pragma once

// The gstwdp command-line tool as a library, so tests can drive it without
// spawning processes.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace gstwdp::cli {

// Bad flags, malformed grids and the like; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid syntax: "a:step:b" (inclusive), "log:a:b:n" (n geometric points),
/// "a,b,c" or a single number.  Empty results are usage errors.
std::vector<double> parse_grid(const std::string& spec);

/// Runs one invocation; `args` excludes the program name.  Returns the exit
/// status: 0 success, 1 runtime failure, 2 usage or parameter error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gstwdp::cli
