#pragma once

#include <stdexcept>
#include <string>

namespace ahspec {

/// Input or precondition violation. The CLI maps this to exit status 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that could not reach its tolerance or broke down.
/// The CLI maps this to exit status 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ahspec
