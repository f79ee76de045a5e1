#include "peertrade/format.hpp"

#include <charconv>
#include <cstdio>

namespace peertrade {

std::string format_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    const int written = std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return std::string(buffer, buffer + (written > 0 ? written : 0));
}

} // namespace peertrade
