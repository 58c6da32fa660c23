#pragma once

#include <stdexcept>
#include <string>

namespace tailcause {

// All errors raised by the library derive from Error. The CLI maps every
// Error to exit code 2; anything else is an internal failure (exit 1).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments, malformed graphs, mismatched node sets.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Data that makes a statistic undefined (zero log ratios, empty tails, n too small).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Unresolvable estimator or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Requested work exceeds a size guard.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Operation not defined for the SCM's coefficient mode or noise setup.
class ModeError : public Error {
public:
    using Error::Error;
};

}  // namespace tailcause
