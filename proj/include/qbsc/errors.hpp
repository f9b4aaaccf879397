#pragma once

#include <stdexcept>
#include <string>

namespace qbsc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value does not fit its register or basis.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A parameter violates an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed gate: bad qubit index, duplicated operand, width mismatch.
class CircuitError : public Error {
public:
    using Error::Error;
};

/// Register layout problem: duplicate or unknown names, overlapping footprints.
class LayoutError : public Error {
public:
    using Error::Error;
};

/// Iteration planning is impossible (for example, no marked states).
class PlanningError : public Error {
public:
    using Error::Error;
};

} // namespace qbsc
