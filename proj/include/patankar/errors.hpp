#pragma once

#include <stdexcept>
#include <string>

namespace patankar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Callback output does not match the declared dimension.
class StructuralError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// A state component that must be strictly positive is zero, negative or NaN.
class NonPositiveInput : public Error {
public:
    using Error::Error;
};

/// MPRK43 tableau denominators vanish (alpha in {0, 2/3} or beta in {0, alpha}).
class TableauSingular : public Error {
public:
    using Error::Error;
};

/// MPRKSO22 exponent gamma has a vanishing denominator (alpha*beta == 1).
class GammaSingular : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class DuplicateNodes : public Error {
public:
    using Error::Error;
};

/// Scheme parameters outside the admissible range, or malformed scheme text.
class InvalidScheme : public Error {
public:
    using Error::Error;
};

/// Problem parameters outside the admissible range.
class InvalidProblem : public Error {
public:
    using Error::Error;
};

} // namespace patankar
