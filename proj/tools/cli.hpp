#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fraglab::cli {

// args excludes the program name; returns the process exit code (0, 1 or 2)
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fraglab::cli
