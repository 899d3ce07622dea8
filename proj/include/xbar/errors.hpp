#pragma once

#include <stdexcept>
#include <string>

namespace xbar {

// Base for all library errors so callers can catch one type at the CLI boundary.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: config values, file formats, violated type invariants.
struct ValidationError : SimError {
    using SimError::SimError;
};

// Root find for the cell model failed to bracket.
struct CalibrationError : SimError {
    using SimError::SimError;
};

// Newton iteration exhausted its budget without meeting the residual bound.
struct NonConvergenceError : SimError {
    NonConvergenceError(const std::string& what, double residual)
        : SimError(what), max_residual(residual) {}
    double max_residual;
};

// Pivot collapsed to zero during LU factorization.
struct SingularJacobianError : SimError {
    using SimError::SimError;
};

}  // namespace xbar
