#pragma once

#include <string>
#include <vector>

namespace blockadapt {

/// Runs one CLI invocation: subcommands constants, kfun, partition,
/// converge, verify. Returns the process exit code: 0 on success, 2 on
/// validation failure, 1 on runtime error.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace blockadapt
