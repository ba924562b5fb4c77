#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symmarkov {

/// Base class for every toolkit error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- construction / validation -----------------------------------------------

/// A pair (i,j) and its mirror (j,i) were supplied with unequal weights.
struct AsymmetryError : Error {
    using Error::Error;
};

/// Some state has zero total fiber mass (row sum of W vanishes).
struct ZeroFiberError : Error {
    using Error::Error;
};

/// A base weight mu_i <= 0 was supplied.
struct NonpositiveBaseError : Error {
    using Error::Error;
};

/// State index outside 0..n-1.
struct IndexError : Error {
    using Error::Error;
};

/// Vector/matrix size does not match the system.
struct DimensionError : Error {
    using Error::Error;
};

/// Target set of a reachability query is empty.
struct EmptyTargetError : Error {
    using Error::Error;
};

// -- kernel DSL ---------------------------------------------------------------

/// Expression text could not be parsed.  Carries the byte offset of the
/// failure and a description of what was expected there.
struct ParseError : Error {
    ParseError(std::size_t offset, const std::string& expected)
        : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
          offset(offset),
          expected(expected) {}
    std::size_t offset;
    std::string expected;
};

/// Identifier other than x, y, or a known function name.
struct UnknownIdentifierError : Error {
    UnknownIdentifierError(std::size_t offset, const std::string& name)
        : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
          offset(offset),
          name(name) {}
    std::size_t offset;
    std::string name;
};

/// Kernel evaluated to NaN, infinity, or a negative value where a
/// nonnegative density is required.  Carries the offending point.
struct EvaluationError : Error {
    EvaluationError(const std::string& what, double x, double y)
        : Error(what + " at (" + std::to_string(x) + ", " + std::to_string(y) + ")"), x(x), y(y) {}
    double x;
    double y;
};

// -- discretization -----------------------------------------------------------

struct LevelTooLargeError : Error {
    using Error::Error;
};

/// A conductance sequence increased between levels; signals quadrature too
/// coarse.  Carries the offending level.
struct MonotonicityViolation : Error {
    MonotonicityViolation(int level, double previous, double current)
        : Error("monotonicity violated at level " + std::to_string(level) + ": " +
                std::to_string(previous) + " -> " + std::to_string(current)),
          level(level),
          previous(previous),
          current(current) {}
    int level;
    double previous;
    double current;
};

// -- solvers ------------------------------------------------------------------

struct ConvergenceError : Error {
    using Error::Error;
};

/// An interior component of a Dirichlet problem never meets the boundary.
struct SingularSystemError : Error {
    using Error::Error;
};

/// A killed domain has a component with no escape to its complement.
struct RecurrentDomainError : Error {
    using Error::Error;
};

// -- measure equivalence ------------------------------------------------------

struct NonpositiveFactorError : Error {
    using Error::Error;
};

struct NonProductFormError : Error {
    using Error::Error;
};

/// f is supported where the multiplier q fails to be harmonic.
struct SupportViolationError : Error {
    using Error::Error;
};

/// Two measures do not share the same support set.
struct SupportMismatchError : Error {
    using Error::Error;
};

// -- path space ---------------------------------------------------------------

/// Start distribution has zero mass.
struct EmptyStartError : Error {
    using Error::Error;
};

struct HorizonExceededError : Error {
    using Error::Error;
};

}  // namespace symmarkov
