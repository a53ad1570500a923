#ifndef REVHENON_MEASURE_HPP
#define REVHENON_MEASURE_HPP

#include "revhenon/map.hpp"
#include "revhenon/polynomial.hpp"

namespace revhenon {

/// Candidate invariant density rho(x, y) = (1 + v(y)) (1 + v(yb)) for the
/// QRexample1 family; v is the derivative of the separable perturbation's
/// first component.
struct DensitySpec {
    Polynomial v;
};

/// Evaluates rho at p, taking yb from `step`.
double density(const MapInstance& map, const DensitySpec& spec, Point2 p,
               const SolverConfig& cfg = {});

/// Residual of the transfer-operator fixed-point identity
/// | rho(p) - rho(step_inverse(p)) / |J| | with J the analytic Jacobian of
/// the forward map. Vanishes (to solver accuracy) exactly when the density is
/// invariant, i.e. when eps1 is a separable sum p(x) + q(y) with p' = v.
double transfer_residual(const MapInstance& map, const DensitySpec& spec, Point2 p,
                         const SolverConfig& cfg = {});

}  // namespace revhenon

#endif
