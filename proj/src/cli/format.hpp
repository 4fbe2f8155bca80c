#pragma once

#include <string>

namespace kinktrap::cli {

/// Shortest decimal string that parses back to exactly the same double.
std::string fmt(double x);
std::string fmt(long long x);

} // namespace kinktrap::cli
