#pragma once

#include <stdexcept>

namespace tubal {

// Operand shapes are incompatible for the requested operation.
struct DimMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inverse transform produced an imaginary residue above tolerance,
// i.e. the spectral input was not conjugate-symmetric.
struct ResidualImaginary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative kernel exceeded its sweep budget.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter outside its admissible range.
struct InvalidParam : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of the function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Runtime diagnostic: the Lagrange multiplier left its theoretical bound,
// which indicates a thresholding implementation bug.
struct MultiplierBoundViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidRate : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidPattern : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroReference : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tubal
