#pragma once

#include <stdexcept>
#include <string>

namespace cosshell {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix that must be antisymmetric failed the skew test.
class NotSkew : public Error {
public:
    using Error::Error;
};

/// A matrix that must be invertible with positive determinant is not.
class Degenerate : public Error {
public:
    using Error::Error;
};

/// The surface gradient lost rank at an evaluation point.
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Thickness or offset violates the curvature admissibility bound.
class Inadmissible : public Error {
public:
    using Error::Error;
};

/// Surface catalog lookup failed.
class UnknownSurface : public Error {
public:
    using Error::Error;
};

/// A small linear system became numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Boundary conditions do not pin the problem down.
class InvalidBcs : public Error {
public:
    using Error::Error;
};

} // namespace cosshell
