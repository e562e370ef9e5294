#ifndef SQUAREX_ERRORS_HPP
#define SQUAREX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace squarex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands belong to different field contexts.
class FieldMismatchError : public Error {
public:
    using Error::Error;
};

/// Multiplicative inverse of zero requested.
class DivisionByZeroError : public Error {
public:
    using Error::Error;
};

/// Field construction rejected: p not an odd prime, modulus not monic
/// irreducible of the right degree, or p^k outside the supported word size.
class InvalidFieldError : public Error {
public:
    using Error::Error;
};

/// Curve construction rejected: b = 0 or r = a^2 - 4b = 0.
class InvalidCurveError : public Error {
public:
    using Error::Error;
};

/// A point that is required to lie on a curve does not.
class OffCurveError : public Error {
public:
    using Error::Error;
};

/// An exhaustive operation was asked to enumerate a field larger than the
/// configured limit.
class EnumerationLimitError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input (field element, point, or modulus).
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace squarex

#endif // SQUAREX_ERRORS_HPP
