#pragma once

#include <stdexcept>

namespace peertrade {

// Rejected input data or configuration. The CLI maps this to exit code 2;
// anything else escaping to main is a runtime failure (exit code 1).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace peertrade
