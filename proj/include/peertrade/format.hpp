#pragma once

#include <string>

namespace peertrade {

// Shortest decimal form that round-trips the exact double. Machine CSVs use
// this so repeated runs are byte-identical and loads are lossless.
std::string format_double(double value);

// Fixed-point form for human-facing tables (default two decimals).
std::string format_fixed(double value, int decimals = 2);

} // namespace peertrade
