#include "revhenon/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "revhenon/errors.hpp"
#include "revhenon/solver.hpp"

namespace revhenon {

namespace {

constexpr double kDedupTol = 1e-6;   // orbit identity, after cyclic alignment
constexpr double kPrimTol = 1e-6;    // sub-period detection

double system_residual(const MapInstance& map, std::span<const Point2> z, const SolverConfig& cfg,
                       std::vector<Point2>& images) {
    const int n = static_cast<int>(z.size());
    images.resize(n);
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
        images[i] = step(map, z[i], cfg);
        r = std::max(r, dist_max(images[i], z[(i + 1) % n]));
    }
    return r;
}

bool has_subperiod(std::span<const Point2> z, double tol) {
    const int n = static_cast<int>(z.size());
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        double gap = 0.0;
        for (int i = 0; i < n; ++i) gap = std::max(gap, dist_max(z[i], z[(i + d) % n]));
        if (gap < tol) return true;
    }
    return false;
}

}  // namespace

const char* stability_name(StabilityType s) {
    switch (s) {
        case StabilityType::Elliptic: return "Elliptic";
        case StabilityType::Saddle: return "Saddle";
        case StabilityType::Sink: return "Sink";
        case StabilityType::Source: return "Source";
        case StabilityType::Parabolic: return "Parabolic";
        default: return "NonorientableSaddle";
    }
}

Orbit find_orbit(const MapInstance& map, int period, std::span<const Point2> seed,
                 const SolverConfig& cfg) {
    if (period < 1) throw std::invalid_argument("find_orbit: period must be positive");
    if (static_cast<int>(seed.size()) != period)
        throw std::invalid_argument("find_orbit: seed length must equal the period");

    const int n = period;
    const int dim = 2 * n;
    std::vector<Point2> z(seed.begin(), seed.end());
    std::vector<Point2> images;
    std::vector<double> A(static_cast<std::size_t>(dim) * dim);
    std::vector<double> rhs(dim);

    double res = system_residual(map, z, cfg, images);
    for (int it = 0; it <= cfg.max_iter; ++it) {
        if (res <= cfg.tol) break;
        if (it == cfg.max_iter) throw NoConvergence("orbit Newton ran out of iterations");

        std::fill(A.begin(), A.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            const Mat2 D = step_differential(map, z[i], images[i]);
            const int r = 2 * i;
            const int c = 2 * i;
            const int cn = 2 * ((i + 1) % n);
            A[(r + 0) * dim + c + 0] = D.a11;
            A[(r + 0) * dim + c + 1] = D.a12;
            A[(r + 1) * dim + c + 0] = D.a21;
            A[(r + 1) * dim + c + 1] = D.a22;
            A[(r + 0) * dim + cn + 0] -= 1.0;
            A[(r + 1) * dim + cn + 1] -= 1.0;
            rhs[r + 0] = images[i].x - z[(i + 1) % n].x;
            rhs[r + 1] = images[i].y - z[(i + 1) % n].y;
        }
        if (!lu_solve(A, rhs, dim, 1e-13))
            throw SingularNewtonMatrix("orbit Newton matrix is singular");

        double lambda = 1.0;
        std::vector<Point2> zn(n);
        double rn = 0.0;
        for (int k = 0;; ++k) {
            for (int i = 0; i < n; ++i)
                zn[i] = {z[i].x - lambda * rhs[2 * i], z[i].y - lambda * rhs[2 * i + 1]};
            rn = system_residual(map, zn, cfg, images);
            if (rn < res || k >= 30) break;
            lambda *= 0.5;
        }
        if (!(rn < res)) throw NoConvergence("orbit Newton stalled");
        z.swap(zn);
        res = rn;
    }

    if (has_subperiod(z, kPrimTol)) throw NonPrimitive("orbit has a proper sub-period");

    Orbit orbit;
    orbit.period = n;
    orbit.points = std::move(z);
    orbit.residual = res;
    annotate_orbit(map, orbit);
    return orbit;
}

Multipliers multipliers(const MapInstance& map, const Orbit& orbit) {
    Mat2 P{1, 0, 0, 1};
    for (int i = 0; i < orbit.period; ++i) {
        const Point2 image = orbit.points[(i + 1) % orbit.period];
        P = step_differential(map, orbit.points[i], image) * P;
    }
    Multipliers m;
    m.trace = P.trace();
    m.det = P.det();
    const auto [e1, e2] = eigenvalues(m.trace, m.det);
    m.ev1 = e1;
    m.ev2 = e2;
    return m;
}

double cycle_jacobian(const MapInstance& map, const Orbit& orbit) {
    double J = 1.0;
    for (int i = 0; i < orbit.period; ++i)
        J *= jacobian_analytic(map, orbit.points[i], orbit.points[(i + 1) % orbit.period]);
    return J;
}

StabilityType classify_stability(double trace, double det, double tol_parabolic) {
    const auto [e1, e2] = eigenvalues(trace, det);
    const double d1 = std::min(std::abs(e1 - 1.0), std::abs(e1 + 1.0));
    const double d2 = std::min(std::abs(e2 - 1.0), std::abs(e2 + 1.0));
    if (std::min(d1, d2) <= tol_parabolic) return StabilityType::Parabolic;

    if (e1.imag() != 0.0) {  // complex pair, modulus sqrt(det)
        const double mod = std::sqrt(det);
        if (std::fabs(mod - 1.0) <= tol_parabolic) return StabilityType::Elliptic;
        return mod < 1.0 ? StabilityType::Sink : StabilityType::Source;
    }
    const double m1 = std::abs(e1), m2 = std::abs(e2);
    if (m1 < 1.0 && m2 < 1.0) return StabilityType::Sink;
    if (m1 > 1.0 && m2 > 1.0) return StabilityType::Source;
    return det < 0.0 ? StabilityType::NonorientableSaddle : StabilityType::Saddle;
}

void annotate_orbit(const MapInstance& map, Orbit& orbit, double tol_parabolic) {
    const Multipliers m = multipliers(map, orbit);
    orbit.trace = m.trace;
    orbit.det = m.det;
    orbit.cycle_det = cycle_jacobian(map, orbit);
    orbit.stability = classify_stability(m.trace, m.det, tol_parabolic);
    const SymmetryResult s = classify_symmetry(orbit, {}, 1e-8);
    orbit.symmetry = s.cls;
    orbit.partner = -1;
}

void canonicalize(Orbit& orbit) {
    int best = 0;
    for (int i = 1; i < orbit.period; ++i) {
        const Point2& p = orbit.points[i];
        const Point2& q = orbit.points[best];
        if (p.x < q.x || (p.x == q.x && p.y < q.y)) best = i;
    }
    std::rotate(orbit.points.begin(), orbit.points.begin() + best, orbit.points.end());
}

double orbit_distance(const Orbit& a, const Orbit& b) {
    if (a.period != b.period) return std::numeric_limits<double>::infinity();
    const int n = a.period;
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d = std::max(d, dist_max(a.points[i], b.points[(i + s) % n]));
        best = std::min(best, d);
    }
    return best;
}

std::vector<Orbit> brute_force_seeds(const MapInstance& map, int period, const SearchBox& box,
                                     const SolverConfig& cfg) {
    if (box.x_min >= box.x_max || box.y_min >= box.y_max)
        throw std::invalid_argument("brute_force_seeds: empty box");
    if (box.grid < 1) throw std::invalid_argument("brute_force_seeds: grid must be positive");

    const int g = box.grid;
    const double escape = 1e4;

    auto scan_rows = [&](int row_lo, int row_hi, std::vector<Orbit>& out) {
        std::vector<Point2> seed(period);
        for (int iy = row_lo; iy < row_hi; ++iy) {
            const double y0 = box.y_min + (box.y_max - box.y_min) * (iy + 0.5) / g;
            for (int ix = 0; ix < g; ++ix) {
                const double x0 = box.x_min + (box.x_max - box.x_min) * (ix + 0.5) / g;
                seed[0] = {x0, y0};
                bool ok = true;
                for (int k = 1; k < period; ++k) {
                    try {
                        seed[k] = step(map, seed[k - 1], cfg);
                    } catch (const NumericsError&) {
                        ok = false;
                        break;
                    }
                    if (max_norm(seed[k]) > escape) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) continue;
                try {
                    Orbit orbit = find_orbit(map, period, seed, cfg);
                    canonicalize(orbit);
                    out.push_back(std::move(orbit));
                } catch (const NumericsError&) {
                    // seed missed; the grid is the coverage story
                }
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    const int workers = std::max(1, std::min<int>(hw == 0 ? 1 : static_cast<int>(hw), g));
    std::vector<std::vector<Orbit>> partial(workers);
    std::vector<std::thread> threads;
    const int rows_per = (g + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * rows_per;
        const int hi = std::min(g, lo + rows_per);
        if (lo >= hi) break;
        threads.emplace_back([&, w, lo, hi] { scan_rows(lo, hi, partial[w]); });
    }
    for (auto& t : threads) t.join();

    std::vector<Orbit> all;
    for (auto& part : partial)
        for (auto& o : part) all.push_back(std::move(o));

    // canonical order first so dedup survivors do not depend on the schedule
    std::sort(all.begin(), all.end(), [](const Orbit& a, const Orbit& b) {
        if (a.points[0].x != b.points[0].x) return a.points[0].x < b.points[0].x;
        return a.points[0].y < b.points[0].y;
    });
    std::vector<Orbit> unique;
    for (auto& o : all) {
        bool dup = false;
        for (const auto& u : unique)
            if (orbit_distance(o, u) < kDedupTol) {
                dup = true;
                break;
            }
        if (!dup) unique.push_back(std::move(o));
    }
    return unique;
}

}  // namespace revhenon
