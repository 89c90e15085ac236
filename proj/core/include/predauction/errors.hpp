#pragma once

#include <stdexcept>
#include <string>

namespace predauction {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bids outside [1, H], parameters out of range, bad files.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An allocation rule handed out more than one item in total, or a
/// reconstructed allocation left [0, 1].
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, double value)
        : Error(what), value_(value) {}

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Adaptive quadrature hit its depth limit before reaching tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

} // namespace predauction
