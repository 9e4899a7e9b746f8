#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hyperdiff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied value: out-of-range parameter, malformed config, etc.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A direction vector of zero length was given where an orientation is needed.
class DegenerateDirection : public Error {
public:
    using Error::Error;
};

/// The 2x2 implicit source matrix has zero determinant.
class SingularSource : public Error {
public:
    SingularSource(const std::string& what, double alpha_s) : Error(what), alpha_s_(alpha_s) {}
    double alpha_s() const noexcept { return alpha_s_; }

private:
    double alpha_s_;
};

/// A non-finite value appeared while marching in pseudo-time.
class Divergence : public Error {
public:
    Divergence(const std::string& what, std::int64_t step) : Error(what), step_(step) {}
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

/// Quadratic with negative discriminant.
class NoRealRoots : public Error {
public:
    using Error::Error;
};

/// Request outside what an analysis routine supports (e.g. non-square mesh).
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Discrete operator with a zero pivot.
class SingularOperator : public Error {
public:
    using Error::Error;
};

}  // namespace hyperdiff
