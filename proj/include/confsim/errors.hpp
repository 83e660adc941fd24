#pragma once

#include <stdexcept>
#include <string>

namespace confsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class UnsupportedExponent : public Error {
public:
    using Error::Error;
};

class InsufficientHistory : public Error {
public:
    using Error::Error;
};

class MismatchedGrids : public Error {
public:
    using Error::Error;
};

/// Raised when a time step moves the order parameter further than the
/// configured guard allows; carries the time at which the step started.
class StepRejected : public Error {
public:
    StepRejected(double time, double increment, double guard)
        : Error("step rejected at t=" + std::to_string(time) + ": increment " +
                std::to_string(increment) + " exceeds guard " + std::to_string(guard)),
          time_(time),
          increment_(increment) {}

    [[nodiscard]] double time() const noexcept { return time_; }
    [[nodiscard]] double increment() const noexcept { return increment_; }

private:
    double time_;
    double increment_;
};

class ChecksumMismatch : public Error {
public:
    using Error::Error;
};

class VersionMismatch : public Error {
public:
    using Error::Error;
};

/// Syntax error in a key-value config file.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// A config value violates a named invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace confsim
