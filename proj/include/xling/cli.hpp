#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xling {

// Runs one command line (args excludes the program name) and returns the
// process exit code: 0 ok, 1 usage, 2 data, 3 numerical.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace xling
