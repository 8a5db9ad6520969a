#pragma once

#include <stdexcept>
#include <string>

namespace amorph {

enum class ErrorKind {
    // exact kernel
    SingularMatrix,
    NonMonicOrNonIntegral,
    DimensionMismatch,
    // scheme
    NotSymmetric,
    BadDiagonal,
    MissingClass,
    InconsistentTriple,
    NonIntegralSpectrum,
    InvalidEigenmatrix,
    // fusion
    NoFusion,
    BadPartition,
    InternalMismatch,
    // fusegraph
    NotAnEdge,
    TooLarge,
    // srg
    InvalidSrgParams,
    DegenerateDenominator,
    TypeMismatch,
    HypothesisFails,
    // amorphic
    TooManyClasses,
    // generators
    BadSize,
    NotPrime,
    BadT,
    // io
    ParseError,
    IoError,
    // a checked property failed; always an implementation bug
    PropertyViolation,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace amorph
