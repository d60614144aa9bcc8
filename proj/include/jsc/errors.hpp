#pragma once

#include <stdexcept>
#include <string>

namespace jsc {

// Every error raised by the library derives from Error. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a documented invariant (shape, finiteness, homogeneity).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input text. Carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Mathematical precondition failed (index out of range, cone not proper,
// matrix not invariant, positivity required...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A configured size cap (Kronecker dimension) would be exceeded.
class SizeError : public Error {
public:
    using Error::Error;
};

// Enumeration budget exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Iterative routine failed to converge (eigen-iteration, simplex cycling).
class NumericalError : public Error {
public:
    using Error::Error;
};

// Monte Carlo estimator found no admissible sample.
class SamplingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace jsc
