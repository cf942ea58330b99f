#pragma once

#include <stdexcept>

namespace aoivoi {

// Invalid system description: bad probabilities, rates, weights, sizes.
struct SpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bracket expansion exhausted without a sign change.
struct NoBracketError : SolverError {
    using SolverError::SolverError;
};

// Iteration budget exhausted before reaching tolerance.
struct NotConvergedError : SolverError {
    using SolverError::SolverError;
};

} // namespace aoivoi
