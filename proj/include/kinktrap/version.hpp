#pragma once

namespace kinktrap {

inline constexpr const char* kVersion = "0.1.0";

} // namespace kinktrap
