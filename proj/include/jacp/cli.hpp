#pragma once
// Command-line surface: parse polynomials and chains, run generators,
// analyses, and seeded sweeps, emit deterministic JSON and CSV reports.

#include <iosfwd>
#include <string>
#include <vector>

namespace jacp {

// Runs one invocation (args[0] is the program name) against the given
// streams and returns the process exit code: 0 = all checks passed,
// 1 = a mathematical check failed, 2 = usage or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace jacp
