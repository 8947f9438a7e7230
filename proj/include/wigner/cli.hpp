#pragma once

#include <string>
#include <vector>

namespace wigner {

/// Parses argv, runs the requested subcommand, writes outputs.
/// Exit codes: 0 success, 1 usage error, 2 degenerate-dominated run.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without the program name

}  // namespace wigner
