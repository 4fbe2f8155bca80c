#include "format.hpp"

#include <array>
#include <charconv>

namespace kinktrap::cli {

std::string fmt(double x)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string fmt(long long x)
{
    return std::to_string(x);
}

} // namespace kinktrap::cli
