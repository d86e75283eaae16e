#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace vscbeat {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string shortest(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

} // namespace vscbeat
