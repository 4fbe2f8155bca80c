#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinktrap::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kRuntimeError = 2 };

/// Runs the command line `kinktrap <args...>`. Output files go where --out
/// points, or to `out` when it is absent; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace kinktrap::cli
