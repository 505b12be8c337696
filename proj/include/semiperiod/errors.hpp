#pragma once

#include <stdexcept>
#include <string>

namespace semiperiod {

/// A model or estimate violates one of its structural invariants.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A caller-supplied argument is out of its domain (negative horizon, bad state, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed sequence input.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (closed form vs recursion, stochasticity).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace semiperiod
