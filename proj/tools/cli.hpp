#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htk::cli {

// args excludes the program name. Exit codes: 0 all checks pass, 1 a check
// failed, 2 bad usage or an input that does not match its schema.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::vector<std::string> subcommands();

}  // namespace htk::cli
