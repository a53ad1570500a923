#ifndef REVHENON_ORBITS_HPP
#define REVHENON_ORBITS_HPP

#include <complex>
#include <span>
#include <vector>

#include "revhenon/map.hpp"
#include "revhenon/reversibility.hpp"

namespace revhenon {

enum class StabilityType { Elliptic, Saddle, Sink, Source, Parabolic, NonorientableSaddle };

const char* stability_name(StabilityType s);

/// A periodic orbit together with its linearization data.
struct Orbit {
    int period = 0;
    std::vector<Point2> points;  // ordered by iteration
    double residual = 0.0;       // max-norm of step(points[i]) - points[i+1]
    double trace = 0.0;          // trace of the chained differential
    double det = 0.0;            // determinant of the chained differential
    double cycle_det = 0.0;      // product of per-step analytic determinants
    SymmetryClass symmetry = SymmetryClass::Asymmetric;
    int partner = -1;
    StabilityType stability = StabilityType::Saddle;
};

struct Multipliers {
    double trace = 0.0;
    double det = 0.0;
    std::complex<double> ev1, ev2;
};

/// Rectangular seeding region for the brute-force search.
struct SearchBox {
    double x_min, x_max, y_min, y_max;
    int grid;  // cells per axis
};

/// Multi-point Newton on the 2n-dimensional system {step(z_i) - z_{i+1} = 0}.
/// The seed fixes the basin; the phase of the seed is preserved. Throws
/// NonPrimitive when the solution has a proper sub-period and
/// SingularNewtonMatrix exactly at bifurcations.
Orbit find_orbit(const MapInstance& map, int period, std::span<const Point2> seed,
                 const SolverConfig& cfg = {});

/// Chain-rule product of the per-step differentials and its eigenvalues.
Multipliers multipliers(const MapInstance& map, const Orbit& orbit);

/// Product of per-point analytic determinants along the cycle.
double cycle_jacobian(const MapInstance& map, const Orbit& orbit);

/// Stability from (trace, det) of the cycle differential. Parabolic wins when
/// an eigenvalue sits within tol_parabolic of +1 or -1.
StabilityType classify_stability(double trace, double det, double tol_parabolic = 1e-8);

/// Grid-seeded Newton from every cell of the box; duplicates merged up to
/// cyclic rotation, sub-periods dropped. Output is sorted by the first point
/// so it is deterministic regardless of execution schedule. Best effort:
/// completeness is a property of the grid, not a contract.
std::vector<Orbit> brute_force_seeds(const MapInstance& map, int period, const SearchBox& box,
                                     const SolverConfig& cfg = {});

/// Rotate the orbit so points[0] is the lexicographically smallest point.
void canonicalize(Orbit& orbit);

/// Max-norm distance between two orbits after the best cyclic alignment.
double orbit_distance(const Orbit& a, const Orbit& b);

/// Fill trace/det/cycle_det/stability/symmetry of an orbit in place.
void annotate_orbit(const MapInstance& map, Orbit& orbit, double tol_parabolic = 1e-8);

}  // namespace revhenon

#endif
