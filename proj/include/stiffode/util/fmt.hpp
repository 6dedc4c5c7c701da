#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace stiffode::util {

/// Decimal rendering with 17 significant digits (round-trip exact for
/// IEEE-754 doubles).
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

}  // namespace stiffode::util
