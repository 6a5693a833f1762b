#pragma once

#include <stdexcept>
#include <string>

namespace gnde {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Operation is not defined for this kind of object (e.g. support tests on a weighted graphon).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

/// Weighted sampling requested on a binary graphon or vice versa.
class WrongRegime : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ComplexityGuard : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class LogDomainError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Integrator gave up: step budget exhausted or fixed-point iteration failed to contract.
class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, double last_time)
        : Error(what), last_time_(last_time) {}

    double last_time() const noexcept { return last_time_; }

private:
    double last_time_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double time) : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class DegenerateReference : public Error {
public:
    DegenerateReference(const std::string& what, double time) : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace gnde
