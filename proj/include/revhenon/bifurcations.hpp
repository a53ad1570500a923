#ifndef REVHENON_BIFURCATIONS_HPP
#define REVHENON_BIFURCATIONS_HPP

#include <functional>
#include <vector>

#include "revhenon/orbits.hpp"

namespace revhenon {

enum class FreeParam { M, B, Mu };

struct BranchSample {
    double param = 0.0;
    Orbit orbit;
};

/// A one-parameter family of orbits obtained by natural-parameter
/// continuation. `map_at` rebuilds the map for any parameter value, so event
/// refinement can re-solve orbits anywhere along the branch.
struct Branch {
    std::function<MapInstance(double)> map_at;
    FreeParam param = FreeParam::M;
    int period = 1;
    std::vector<BranchSample> samples;
    bool stalled = false;      // continuation stopped before the range end
    double stall_param = 0.0;  // parameter at which the step floor was hit
};

struct ContinuationOptions {
    double initial_step = 1e-2;
    double min_step = 1e-9;      // below this the branch is stalled
    double jump_factor = 8.0;    // reject steps that move points this much faster than the trend
    bool allow_stall = false;    // record the stall instead of throwing
};

/// Continue `start` (valid at `from`) towards `to`, halving the step on
/// Newton failure or on branch jumps. Throws StallAtSingularity when the step
/// floor is hit, unless opts.allow_stall asks for a partial branch instead.
Branch continue_branch(std::function<MapInstance(double)> map_at, FreeParam which, double from,
                       double to, const Orbit& start, const ContinuationOptions& opts,
                       const SolverConfig& cfg = {});

enum class EventKind { Fold, Pitchfork, PeriodDoubling, ParabolicBirth, ResonanceCrossing };

const char* event_kind_name(EventKind k);

struct BifurcationEvent {
    EventKind kind = EventKind::Fold;
    int res_p = 0, res_q = 0;  // ResonanceCrossing only
    double parameter = 0.0;
    Orbit orbit_at_event;
    std::vector<Orbit> emitted;  // seeds for the orbits created at the event
};

/// Locate eigenvalue crossings of +1 and -1 along the branch (bisection to
/// 1e-9 in the parameter), disambiguate +1 crossings by counting nearby
/// orbits on both sides, log resonance crossings e^{2 pi i p/q} with q <= 6
/// on elliptic segments, and resolve the boundary of a stalled branch.
std::vector<BifurcationEvent> detect_events(const Branch& branch, const SolverConfig& cfg = {});

/// Fold curve of the product family: 4(1 + b mu) M = -(b - 1)^2.
double curve_F(double b, double mu);
/// Reversible pitchfork curve: 4 M = (3 + b mu)(b - 1)^2.
double curve_PF(double b, double mu);

struct T2muFixedPoints {
    std::vector<Point2> symmetric;   // 0, 1 or 2 points on the line x = y
    bool has_asymmetric_pair = false;
    Point2 M1, M2;                   // the symmetric couple, present iff D > 0
    double D = 0.0;
    double J1 = 0.0, J2 = 0.0;       // Jacobians at M1, M2
};
T2muFixedPoints t2mu_fixed_points(double b, double M, double mu);

struct Hm1muFixedPoints {
    Point2 S1, S2;
    double J1 = 0.0, J2 = 0.0;
};
Hm1muFixedPoints hm1mu_fixed_points(double M, double mu);

/// The two symmetric period-6 orbits of the orientable map, in closed form.
/// branch 1 exists for M >= 5/4, branch 2 for M >= -3/4; below the birth
/// parameter a domain error is thrown. At the birth parameter itself the
/// returned orbit is degenerate (pairs of points coincide).
Orbit symmetric_period6_closed_form(double M, int branch, const SolverConfig& cfg = {});

/// Trace of the period-6 cycle differential as a polynomial in x = sqrt(M+1).
double trace_polynomial(double x);           // factored form
double trace_polynomial_expanded(double x);  // expanded form

/// Bisection on (trace - (1 + det)) or (trace + (1 + det)) of the period-n
/// orbit continued between two parameter values that bracket a sign change.
/// `eig` is +1 or -1. Returns the refined parameter.
double bisect_eigenvalue_crossing(const std::function<MapInstance(double)>& map_at, int period,
                                  const Orbit& orbit_lo, double param_lo, double param_hi,
                                  double eig, double param_tol = 1e-12,
                                  const SolverConfig& cfg = {});

/// Newton on the extended system {orbit equations, trace - target = 0} in
/// (points, parameter); polishes a parabolic orbit (fold locator for
/// target = +2, period-doubling locator for target = -2).
struct ParabolicOrbit {
    double param = 0.0;
    Orbit orbit;
};
ParabolicOrbit locate_trace_crossing(const std::function<MapInstance(double)>& map_at, int period,
                                     const Orbit& seed, double seed_param, double target_trace,
                                     const SolverConfig& cfg = {});

}  // namespace revhenon

#endif
