#include "revhenon/bifurcations.hpp"

#include <algorithm>
#include <cmath>

#include "revhenon/errors.hpp"

namespace revhenon {

namespace {

// g(orbit) whose zero marks an eigenvalue at `eig` (+1 or -1):
// eig = +1:  trace - (1 + det),   eig = -1:  trace + (1 + det)
double eig_gap(const Orbit& o, double eig) {
    return eig > 0 ? o.trace - (1.0 + o.det) : o.trace + (1.0 + o.det);
}

Orbit solve_at(const std::function<MapInstance(double)>& map_at, double param, int period,
               std::span<const Point2> seed, const SolverConfig& cfg) {
    return find_orbit(map_at(param), period, seed, cfg);
}

}  // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Fold: return "Fold";
        case EventKind::Pitchfork: return "Pitchfork";
        case EventKind::PeriodDoubling: return "PeriodDoubling";
        case EventKind::ParabolicBirth: return "ParabolicBirth";
        default: return "ResonanceCrossing";
    }
}

// ------------------------------------------------------------------
// continuation
// ------------------------------------------------------------------

Branch continue_branch(std::function<MapInstance(double)> map_at, FreeParam which, double from,
                       double to, const Orbit& start, const ContinuationOptions& opts,
                       const SolverConfig& cfg) {
    Branch br;
    br.map_at = std::move(map_at);
    br.param = which;
    br.period = start.period;
    br.samples.push_back({from, start});

    const double dir = to >= from ? 1.0 : -1.0;
    double step_size = std::fabs(opts.initial_step);
    double param = from;
    // points-per-parameter rate of the last accepted step, for the jump guard
    double last_rate = -1.0;

    while (dir * (to - param) > 1e-15) {
        if (step_size < opts.min_step) {
            br.stalled = true;
            br.stall_param = param;
            if (!opts.allow_stall)
                throw StallAtSingularity("continuation step below floor at parameter " +
                                         std::to_string(param));
            return br;
        }
        double next = param + dir * step_size;
        if (dir * (to - next) < 0) next = to;

        const Orbit& prev = br.samples.back().orbit;
        bool accepted = false;
        try {
            Orbit cand = solve_at(br.map_at, next, br.period, prev.points, cfg);
            const double moved = orbit_distance(cand, prev);
            const double dp = std::fabs(next - param);
            const bool rate_jump = last_rate > 0.0 &&
                                   moved > opts.jump_factor * last_rate * dp && moved > 1e-6;
            // landing on an orbit of a different symmetry class means the
            // branch ceased to exist and Newton slid onto a neighbour
            const bool class_jump = cand.symmetry != prev.symmetry && moved > 1e-9;
            if (!rate_jump && !class_jump) {
                last_rate = moved / std::max(dp, 1e-300);
                br.samples.push_back({next, std::move(cand)});
                param = next;
                accepted = true;
            }
        } catch (const NumericsError&) {
            // fall through to step halving
        }
        if (accepted) {
            step_size = std::min(step_size * 1.4, std::fabs(opts.initial_step));
        } else {
            step_size *= 0.5;
        }
    }
    return br;
}

// ------------------------------------------------------------------
// event detection
// ------------------------------------------------------------------

namespace {

struct Refined {
    double param = 0.0;
    Orbit carrier;  // orbit at the last solvable parameter inside the bracket
};

Refined refine_crossing(const std::function<MapInstance(double)>& map_at, int period,
                        const Orbit& orbit_lo, double param_lo, double param_hi, double eig,
                        double param_tol, const SolverConfig& cfg) {
    Refined r;
    r.carrier = orbit_lo;
    double g_lo = eig_gap(r.carrier, eig);
    double a = param_lo, b = param_hi;
    while (std::fabs(b - a) > param_tol) {
        // the orbit Newton matrix degenerates exactly at the crossing, so a
        // midpoint that refuses to solve is nudged off centre before giving up
        bool solved = false;
        Orbit om;
        double mid = 0.5 * (a + b);
        for (const double frac : {0.5, 0.45, 0.55}) {
            mid = a + frac * (b - a);
            try {
                om = solve_at(map_at, mid, period, r.carrier.points, cfg);
                solved = true;
                break;
            } catch (const NumericsError&) {
            }
        }
        if (!solved) break;
        const double gm = eig_gap(om, eig);
        if ((gm < 0) == (g_lo < 0)) {
            a = mid;
            r.carrier = std::move(om);
            g_lo = gm;
        } else {
            b = mid;
        }
    }
    r.param = 0.5 * (a + b);
    return r;
}

}  // namespace

double bisect_eigenvalue_crossing(const std::function<MapInstance(double)>& map_at, int period,
                                  const Orbit& orbit_lo, double param_lo, double param_hi,
                                  double eig, double param_tol, const SolverConfig& cfg) {
    return refine_crossing(map_at, period, orbit_lo, param_lo, param_hi, eig, param_tol, cfg).param;
}

namespace {

// Count distinct primitive period-n orbits near `center` at the given
// parameter, and hand them back for symmetry bookkeeping. The box sits
// around one point of the event orbit; every orbit that merges at the event
// keeps a point in it, and everything found farther than twice the radius
// from the event orbit is discarded as a bystander.
std::vector<Orbit> orbits_near(const std::function<MapInstance(double)>& map_at, double param,
                               const Orbit& center, double radius, const SolverConfig& cfg) {
    const Point2 c = center.points[0];
    SearchBox box{c.x - radius, c.x + radius, c.y - radius, c.y + radius, 48};
    std::vector<Orbit> found = brute_force_seeds(map_at(param), center.period, box, cfg);
    std::vector<Orbit> close;
    for (auto& o : found)
        if (orbit_distance(o, center) < 2.0 * radius) close.push_back(std::move(o));
    return close;
}

struct RawCrossing {
    double eig;  // +1 or -1
    double param;
    Orbit orbit;
};

// Fold vs pitchfork vs birth for an eigenvalue-at-+1 event, decided by
// counting nearby period-n orbits on both sides of the parameter.
BifurcationEvent classify_plus1(const std::function<MapInstance(double)>& map_at, double param,
                                const Orbit& carrier, double probe, double radius,
                                const SolverConfig& cfg) {
    std::vector<Orbit> below, above;
    try {
        below = orbits_near(map_at, param - probe, carrier, radius, cfg);
        above = orbits_near(map_at, param + probe, carrier, radius, cfg);
    } catch (const NumericsError&) {
        throw AmbiguousEvent("orbit counting failed near parameter " + std::to_string(param));
    }
    const std::size_t n_lo = below.size(), n_hi = above.size();
    if (n_lo > n_hi) std::swap(below, above);
    const std::size_t few = std::min(n_lo, n_hi), many = std::max(n_lo, n_hi);
    if (few == 1 && many == 3) {
        // symmetry-breaking check: one symmetric survivor plus a couple
        std::vector<Orbit>& after = above;
        int sym = 0, couple = 0;
        for (std::size_t k = 0; k < after.size(); ++k) {
            const SymmetryResult r = classify_symmetry(after[k], after, 1e-7);
            after[k].symmetry = r.cls;
            after[k].partner = r.partner;
            if (r.cls == SymmetryClass::Symmetric) ++sym;
            if (r.cls == SymmetryClass::CoupleMember) ++couple;
        }
        if (sym == 1 && couple == 2) {
            BifurcationEvent ev{EventKind::Pitchfork, 0, 0, param, carrier, {}};
            for (auto& o : after)
                if (o.symmetry == SymmetryClass::CoupleMember) ev.emitted.push_back(o);
            return ev;
        }
        throw AmbiguousEvent("1 <-> 3 crossing without a symmetric couple at parameter " +
                             std::to_string(param));
    }
    if ((few == 1 && many == 2) || (few == 0 && many == 2)) {
        BifurcationEvent ev{EventKind::Fold, 0, 0, param, carrier, {}};
        for (auto& o : above) ev.emitted.push_back(o);
        return ev;
    }
    if (few == 0 && many == 1) return {EventKind::ParabolicBirth, 0, 0, param, carrier, {}};
    throw AmbiguousEvent("orbit counting inconclusive (" + std::to_string(n_lo) + " vs " +
                         std::to_string(n_hi) + ") at parameter " + std::to_string(param));
}

}  // namespace

std::vector<BifurcationEvent> detect_events(const Branch& branch, const SolverConfig& cfg) {
    if (branch.samples.size() < 3)
        throw std::invalid_argument("detect_events: branch needs at least 3 samples");

    const auto& S = branch.samples;
    const double span = std::fabs(S.back().param - S.front().param);
    // typical accepted step, for sizing the counting boxes
    std::vector<double> gaps;
    for (std::size_t i = 0; i + 1 < S.size(); ++i)
        gaps.push_back(std::fabs(S[i + 1].param - S[i].param));
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    const double branch_step = gaps[gaps.size() / 2];

    std::vector<RawCrossing> crossings;
    for (double eig : {+1.0, -1.0}) {
        for (std::size_t i = 0; i + 1 < S.size(); ++i) {
            const double g0 = eig_gap(S[i].orbit, eig);
            const double g1 = eig_gap(S[i + 1].orbit, eig);
            if ((g0 < 0) != (g1 < 0)) {
                // the carrier sits within the bisection tolerance of the
                // event; re-solving exactly at the event would hit the
                // singular Newton matrix
                Refined r = refine_crossing(branch.map_at, branch.period, S[i].orbit, S[i].param,
                                            S[i + 1].param, eig, 1e-10, cfg);
                crossings.push_back({eig, r.param, std::move(r.carrier)});
            }
        }
    }

    std::sort(crossings.begin(), crossings.end(),
              [](const RawCrossing& a, const RawCrossing& b) { return a.param < b.param; });

    std::vector<BifurcationEvent> events;
    const double probe = std::max(1e-3 * span, 1e-5);
    const double radius = std::max(10.0 * branch_step, 1e-2);

    for (std::size_t i = 0; i < crossings.size(); ++i) {
        RawCrossing& c = crossings[i];
        // a +1 and a -1 crossing at the same parameter is a fold-flip point
        if (i + 1 < crossings.size() && crossings[i + 1].eig != c.eig &&
            std::fabs(crossings[i + 1].param - c.param) < 1e-6 * std::max(1.0, span)) {
            events.push_back({EventKind::ParabolicBirth, 0, 0, c.param, c.orbit, {}});
            ++i;
            continue;
        }
        if (c.eig < 0) {
            events.push_back({EventKind::PeriodDoubling, 0, 0, c.param, c.orbit, {}});
            continue;
        }
        events.push_back(classify_plus1(branch.map_at, c.param, c.orbit, probe, radius, cfg));
    }

    // resonance crossings e^{+-2 pi i p/q}, q <= 6, on elliptic segments
    struct Res {
        int p, q;
        double trace;
    };
    const Res table[] = {{1, 3, -1.0}, {1, 4, 0.0}, {2, 5, 2.0 * std::cos(4.0 * M_PI / 5.0)},
                         {1, 5, 2.0 * std::cos(2.0 * M_PI / 5.0)}, {1, 6, 1.0}};
    for (const Res& r : table) {
        for (std::size_t i = 0; i + 1 < S.size(); ++i) {
            if (std::fabs(S[i].orbit.det - 1.0) > 1e-6) continue;
            const double g0 = S[i].orbit.trace - r.trace;
            const double g1 = S[i + 1].orbit.trace - r.trace;
            if ((g0 < 0) == (g1 < 0)) continue;
            double a = S[i].param, b = S[i + 1].param;
            Orbit lo = S[i].orbit;
            double ga = g0;
            while (std::fabs(b - a) > 1e-12) {
                const double mid = 0.5 * (a + b);
                Orbit om;
                try {
                    om = solve_at(branch.map_at, mid, branch.period, lo.points, cfg);
                } catch (const NumericsError&) {
                    break;
                }
                const double gm = om.trace - r.trace;
                if ((gm < 0) == (ga < 0)) {
                    a = mid;
                    lo = std::move(om);
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            events.push_back({EventKind::ResonanceCrossing, r.p, r.q, 0.5 * (a + b), std::move(lo), {}});
        }
    }

    // a stalled branch ends where the orbit ceases to exist; bracket that
    // boundary and classify it by its eigenvalues
    if (branch.stalled) {
        const BranchSample& last = S.back();
        double inside = last.param;
        const double dir = inside - S.front().param >= 0 ? 1.0 : -1.0;
        double outside = inside + dir * 1e-3;
        Orbit carrier = last.orbit;
        // push `outside` until the orbit really fails to continue there
        for (int k = 0; k < 12; ++k) {
            try {
                Orbit probe_orbit = solve_at(branch.map_at, outside, branch.period, carrier.points, cfg);
                if (probe_orbit.symmetry != carrier.symmetry) break;  // slid onto a neighbour
                inside = outside;
                carrier = std::move(probe_orbit);
                outside = inside + dir * 1e-3 * (1 << k);
            } catch (const NumericsError&) {
                break;
            }
        }
        const double jump_gate =
            20.0 * std::max(1e-3, orbit_distance(last.orbit, S[S.size() - 2].orbit));
        for (int k = 0; k < 60 && std::fabs(outside - inside) > 1e-11; ++k) {
            const double mid = 0.5 * (inside + outside);
            try {
                Orbit om = solve_at(branch.map_at, mid, branch.period, carrier.points, cfg);
                if (om.symmetry != carrier.symmetry || orbit_distance(om, carrier) > jump_gate) {
                    outside = mid;  // slid onto a different orbit: treat as gone
                } else {
                    inside = mid;
                    carrier = std::move(om);
                }
            } catch (const NumericsError&) {
                outside = mid;
            }
        }
        const auto [e1, e2] = eigenvalues(carrier.trace, carrier.det);
        const double near1 = std::min(std::abs(e1 - 1.0), std::abs(e2 - 1.0));
        const double nearm1 = std::min(std::abs(e1 + 1.0), std::abs(e2 + 1.0));
        const double scale = std::sqrt(std::fabs(inside - outside)) + 1e-6;
        const double boundary = 0.5 * (inside + outside);
        if (near1 < 100.0 * scale && nearm1 < 100.0 * scale) {
            // eigenvalues at +1 and -1 simultaneously: a fold-flip point
            events.push_back({EventKind::ParabolicBirth, 0, 0, boundary, std::move(carrier), {}});
        } else if (near1 <= nearm1) {
            events.push_back(classify_plus1(branch.map_at, boundary, carrier, probe, radius, cfg));
        } else {
            events.push_back({EventKind::PeriodDoubling, 0, 0, boundary, std::move(carrier), {}});
        }
    }

    std::sort(events.begin(), events.end(),
              [](const BifurcationEvent& a, const BifurcationEvent& b) {
                  return a.parameter < b.parameter;
              });
    return events;
}

// ------------------------------------------------------------------
// closed forms of the product family and the nonorientable family
// ------------------------------------------------------------------

double curve_F(double b, double mu) {
    if (std::fabs(b) < 1e-6) throw DenominatorVanishes("curve_F: b too close to 0");
    const double den = 4.0 * (1.0 + b * mu);
    if (std::fabs(den) < 1e-12) throw DenominatorVanishes("curve_F: 1 + b mu vanishes");
    return -(b - 1.0) * (b - 1.0) / den;
}

double curve_PF(double b, double mu) {
    if (std::fabs(b) < 1e-6) throw DenominatorVanishes("curve_PF: b too close to 0");
    return (3.0 + b * mu) * (b - 1.0) * (b - 1.0) / 4.0;
}

T2muFixedPoints t2mu_fixed_points(double b, double M, double mu) {
    if (std::fabs(b) < 1e-6) throw DenominatorVanishes("t2mu_fixed_points: b too close to 0");
    if (std::fabs(1.0 - b * mu) < 1e-12)
        throw DenominatorVanishes("t2mu_fixed_points: 1 - b mu vanishes");

    T2muFixedPoints out;
    // symmetric points: (1 + b mu) x^2 + (1 - b) x - M = 0 on the line x = y
    const double A = 1.0 + b * mu, B = 1.0 - b, C = -M;
    const double disc = B * B - 4.0 * A * C;
    if (std::fabs(A) < 1e-12) {
        if (std::fabs(B) > 1e-12) {
            const double x = -C / B;
            out.symmetric.push_back({x, x});
        }
    } else if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double x1 = (-B - s) / (2.0 * A), x2 = (-B + s) / (2.0 * A);
        out.symmetric.push_back({x1, x1});
        if (disc > 0.0) out.symmetric.push_back({x2, x2});
    }

    out.D = (4.0 * M - (1.0 - b) * (1.0 - b) * (3.0 + b * mu)) / (4.0 * (1.0 - b * mu));
    if (out.D > 0.0) {
        out.has_asymmetric_pair = true;
        const double s = 0.5 * (1.0 - b), r = std::sqrt(out.D);
        out.M1 = {s + r, s - r};
        out.M2 = {s - r, s + r};
        const double d1 = 2.0 + b * mu * (1.0 - b + 2.0 * r);
        const double d2 = 2.0 + b * mu * (1.0 - b - 2.0 * r);
        if (std::fabs(d1) < 1e-12 || std::fabs(d2) < 1e-12)
            throw DenominatorVanishes("t2mu_fixed_points: Jacobian denominator vanishes");
        out.J1 = 1.0 - 4.0 * b * mu * r / d1;
        out.J2 = 1.0 + 4.0 * b * mu * r / d2;
    }
    return out;
}

Hm1muFixedPoints hm1mu_fixed_points(double M, double mu) {
    if (!(M > 0.0)) throw std::domain_error("hm1mu_fixed_points: M must be positive");
    if (!(1.0 + 2.0 * mu > 0.0)) throw std::domain_error("hm1mu_fixed_points: 1 + 2 mu <= 0");
    const double a = std::sqrt(M / (1.0 + 2.0 * mu));
    Hm1muFixedPoints out;
    out.S1 = {-a, a};
    out.S2 = {a, -a};
    const double sM = std::sqrt(M), root = std::sqrt(1.0 + 2.0 * mu);
    const double d1 = root - mu * sM, d2 = root + mu * sM;
    if (std::fabs(d1) < 1e-12 || std::fabs(d2) < 1e-12)
        throw DenominatorVanishes("hm1mu_fixed_points: Jacobian denominator vanishes");
    out.J1 = -1.0 - 2.0 * mu * sM / d1;
    out.J2 = -1.0 + 2.0 * mu * sM / d2;
    return out;
}

Orbit symmetric_period6_closed_form(double M, int branch, const SolverConfig& cfg) {
    if (branch != 1 && branch != 2) throw std::invalid_argument("branch must be 1 or 2");
    if (M + 1.0 < 0.0) throw std::domain_error("symmetric_period6_closed_form: M < -1");
    const double x = std::sqrt(M + 1.0);
    const double disc = branch == 1 ? 1.0 - 4.0 * x + 4.0 * M : 1.0 + 4.0 * x + 4.0 * M;
    if (disc < 0.0)
        throw std::domain_error("symmetric_period6_closed_form: below the birth parameter");
    const double s = std::sqrt(disc);
    const double y1 = 0.5 * (-1.0 - s);
    const double y2 = branch == 1 ? x : -x;
    const double y3 = 0.5 * (-1.0 + s);
    const double ys[6] = {y1, y2, y3, y3, y2, y1};

    Orbit orbit;
    orbit.period = 6;
    orbit.points.resize(6);
    for (int i = 0; i < 6; ++i) orbit.points[i] = {ys[(i + 5) % 6], ys[i]};

    const MapInstance map = MapInstance::conservative_h(Nonlinearity::quadratic_minus(M));
    double res = 0.0;
    for (int i = 0; i < 6; ++i)
        res = std::max(res, dist_max(step(map, orbit.points[i], cfg), orbit.points[(i + 1) % 6]));
    orbit.residual = res;
    annotate_orbit(map, orbit);
    return orbit;
}

double trace_polynomial(double x) {
    const double t = 2.0 * x + 1.0;
    return 2.0 + 4.0 * x * t * t * t * (2.0 * x - 3.0) * (x - 2.0);
}

double trace_polynomial_expanded(double x) {
    return 2.0 + x * (24.0 + x * (116.0 + x * (128.0 + x * (-96.0 + x * (-128.0 + x * 64.0)))));
}

// ------------------------------------------------------------------
// parabolic-orbit locator
// ------------------------------------------------------------------

ParabolicOrbit locate_trace_crossing(const std::function<MapInstance(double)>& map_at, int period,
                                     const Orbit& seed, double seed_param, double target_trace,
                                     const SolverConfig& cfg) {
    const int n = period;
    const int dim = 2 * n + 1;  // points and the parameter
    std::vector<double> z(dim);
    for (int i = 0; i < n; ++i) {
        z[2 * i] = seed.points[i].x;
        z[2 * i + 1] = seed.points[i].y;
    }
    z[dim - 1] = seed_param;

    auto trace_at = [&](const std::vector<double>& w) {
        const MapInstance m = map_at(w[dim - 1]);
        Mat2 P{1, 0, 0, 1};
        for (int i = 0; i < n; ++i) {
            const Point2 p{w[2 * i], w[2 * i + 1]};
            const Point2 q{w[2 * ((i + 1) % n)], w[2 * ((i + 1) % n) + 1]};
            P = step_differential(m, p, q) * P;
        }
        return P.trace();
    };

    std::vector<double> A(static_cast<std::size_t>(dim) * dim);
    std::vector<double> rhs(dim);
    for (int it = 0; it < 80; ++it) {
        const MapInstance m = map_at(z[dim - 1]);
        std::fill(A.begin(), A.end(), 0.0);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            const Point2 p{z[2 * i], z[2 * i + 1]};
            const Point2 img = step(m, p, cfg);
            const Point2 nxt{z[2 * ((i + 1) % n)], z[2 * ((i + 1) % n) + 1]};
            rhs[2 * i] = img.x - nxt.x;
            rhs[2 * i + 1] = img.y - nxt.y;
            res = std::max({res, std::fabs(rhs[2 * i]), std::fabs(rhs[2 * i + 1])});
            const Mat2 D = step_differential(m, p, img);
            A[(2 * i) * dim + 2 * i] = D.a11;
            A[(2 * i) * dim + 2 * i + 1] = D.a12;
            A[(2 * i + 1) * dim + 2 * i] = D.a21;
            A[(2 * i + 1) * dim + 2 * i + 1] = D.a22;
            A[(2 * i) * dim + 2 * ((i + 1) % n)] -= 1.0;
            A[(2 * i + 1) * dim + 2 * ((i + 1) % n) + 1] -= 1.0;
            // parameter column by central differences of the step
            const double h = 1e-7 * std::max(1.0, std::fabs(z[dim - 1]));
            const Point2 ip = step(map_at(z[dim - 1] + h), p, cfg);
            const Point2 im = step(map_at(z[dim - 1] - h), p, cfg);
            A[(2 * i) * dim + dim - 1] = (ip.x - im.x) / (2.0 * h);
            A[(2 * i + 1) * dim + dim - 1] = (ip.y - im.y) / (2.0 * h);
        }
        const double tr = trace_at(z);
        rhs[dim - 1] = tr - target_trace;
        res = std::max(res, std::fabs(rhs[dim - 1]));
        if (res < 1e-11) break;
        // trace row by central differences
        for (int k = 0; k < dim; ++k) {
            const double h = 1e-6 * std::max(1.0, std::fabs(z[k]));
            std::vector<double> wp = z, wm = z;
            wp[k] += h;
            wm[k] -= h;
            A[(dim - 1) * dim + k] = (trace_at(wp) - trace_at(wm)) / (2.0 * h);
        }
        if (!lu_solve(A, rhs, dim, 1e-13))
            throw SingularNewtonMatrix("parabolic locator matrix is singular");
        for (int k = 0; k < dim; ++k) z[k] -= rhs[k];
    }

    ParabolicOrbit out;
    out.param = z[dim - 1];
    std::vector<Point2> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = {z[2 * i], z[2 * i + 1]};
    const MapInstance m = map_at(out.param);
    out.orbit.period = n;
    out.orbit.points = pts;
    double res = 0.0;
    for (int i = 0; i < n; ++i)
        res = std::max(res, dist_max(step(m, pts[i], cfg), pts[(i + 1) % n]));
    out.orbit.residual = res;
    annotate_orbit(m, out.orbit);
    if (res > 1e-9 || std::fabs(out.orbit.trace - target_trace) > 1e-6)
        throw NoConvergence("parabolic locator did not converge");
    return out;
}

}  // namespace revhenon
