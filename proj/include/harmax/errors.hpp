#pragma once

#include <stdexcept>
#include <string>

namespace harmax {

// Bad inputs: precondition or domain violations. CLI maps this to exit code 3.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A construction or certified chain failed its own postcondition check.
// Never swallowed; CLI maps this to exit code 4.
class algorithm_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace harmax
