#pragma once

#include <stdexcept>
#include <string>

namespace impcomp {

/// Input rejected before any computation ran (bad parameter, malformed config).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to deliver a result within its stated tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace impcomp
