#pragma once

#include <stdexcept>
#include <string>

namespace tcs {

enum class ErrorKind {
    argument,     // bad call: shape mismatch, index out of range, invalid config
    data,         // input data unusable: too few rows, parse failures, missing columns
    numeric,      // singular regressions, degenerate fits, non-finite values
    convergence,  // iterative routine hit its cap
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& what) : Error(ErrorKind::argument, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(ErrorKind::convergence, what) {}
};

/// Throws the subclass matching kind, so callers can catch by type.
[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
    switch (kind) {
    case ErrorKind::argument: throw ArgumentError(what);
    case ErrorKind::data: throw DataError(what);
    case ErrorKind::convergence: throw ConvergenceError(what);
    case ErrorKind::numeric: break;
    }
    throw NumericError(what);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ArgumentError(msg);
}

}  // namespace tcs
