#pragma once

#include <stdexcept>
#include <string>

namespace dlsrr {

/// Base of every exception thrown by the core library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of a model or correlation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A specification or scenario violates one of its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed structured text; carries the 1-based line number (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The integrator ran past its time limit without reaching the target event.
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// The vehicle hit the ground before reaching apogee.
class GroundImpactError : public Error {
public:
    using Error::Error;
};

/// Every candidate of a firing-angle search failed.
class OptimizationError : public Error {
public:
    using Error::Error;
};

/// A propellant record lacks the data an operation needs.
class UnsupportedRecordError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dlsrr
