#ifndef REVHENON_ERRORS_HPP
#define REVHENON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace revhenon {

/// Base class for every numerical failure the library reports.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Newton ran out of iterations; the perturbative regime was left.
struct NoConvergence : NumericsError {
    using NumericsError::NumericsError;
};

/// An implicit-equation derivative vanished; the diffeomorphism breaks down here.
struct IllConditioned : NumericsError {
    using NumericsError::NumericsError;
};

/// A closed-form Jacobian denominator vanished.
struct DenominatorVanishes : NumericsError {
    using NumericsError::NumericsError;
};

/// The orbit solver converged onto an orbit of smaller period.
struct NonPrimitive : NumericsError {
    using NumericsError::NumericsError;
};

/// The multi-point Newton matrix is singular (exactly at a bifurcation).
struct SingularNewtonMatrix : NumericsError {
    using NumericsError::NumericsError;
};

/// Continuation step fell below the floor; typically a fold in the chosen parameter.
struct StallAtSingularity : NumericsError {
    using NumericsError::NumericsError;
};

/// Local orbit counting around an event was inconclusive.
struct AmbiguousEvent : NumericsError {
    using NumericsError::NumericsError;
};

}  // namespace revhenon

#endif
