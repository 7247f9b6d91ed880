#pragma once

#include <stdexcept>
#include <string>

namespace normopt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad population size, indivisible group counts, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A norm vector violates its bounds or the redistribute simplex constraint.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition (empty input, mismatched
/// objective sets, unevaluated individuals).
class ContractError : public Error {
public:
    using Error::Error;
};

/// The simulation reached a state on which a value is undefined
/// (e.g. all-zero wealth, where the Gini denominator vanishes).
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

/// File I/O failure; the message carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace normopt
