#pragma once

#include <stdexcept>
#include <string>

namespace qsphere {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Division by the zero rational function (or zero scalar element).
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// Evaluation of a rational function at a point where the denominator vanishes.
struct PoleError : Error {
    explicit PoleError(const std::string& what) : Error(what) {}
};

/// Argument outside the contract of an operation (q0 out of range, bad degree, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// An algebra element fails a grading requirement (e.g. a cocycle argument not in the
/// degree-zero subalgebra, or a form component with the wrong weight).
struct GradeError : Error {
    explicit GradeError(const std::string& what) : Error(what) {}
};

/// Parser failure; `offset` is the byte position in the input string.
struct ParseError : Error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& what)
        : Error("parse error at byte " + std::to_string(off) + ": " + what), offset(off) {}
};

/// The exact linear solve for a projection's coefficients has no solution.
struct SolveError : Error {
    explicit SolveError(const std::string& what) : Error(what) {}
};

/// A functional handed to a pairing fails its cocycle precondition; the witness
/// tuple is embedded in the message.
struct CocycleError : Error {
    explicit CocycleError(const std::string& what) : Error(what) {}
};

} // namespace qsphere
