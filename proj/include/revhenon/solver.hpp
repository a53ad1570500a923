#ifndef REVHENON_SOLVER_HPP
#define REVHENON_SOLVER_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "revhenon/errors.hpp"
#include "revhenon/geometry.hpp"

namespace revhenon {

struct SolverConfig {
    double tol = 1e-13;     // residual max-norm accepted by implicit solves
    int max_iter = 50;      // Newton iteration budget
    double fd_step = 1e-6;  // central-difference step
};

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1 || !(cfg.fd_step > 0.0))
        throw std::invalid_argument("solver config: need tol > 0, max_iter >= 1, fd_step > 0");
}

inline constexpr double kDerivativeFloor = 1e-12;  // |d| below this is treated as a breakdown

/// Damped scalar Newton seeded by the caller. Converges to residual <= cfg.tol
/// and then takes one more full step to squeeze out the last digits.
template <typename F, typename DF>
double newton_scalar(F&& f, DF&& df, double seed, const SolverConfig& cfg) {
    double t = seed;
    double r = f(t);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (std::fabs(r) <= cfg.tol) {
            const double d = df(t);
            if (std::fabs(d) > kDerivativeFloor) {
                const double t2 = t - r / d;
                const double r2 = f(t2);
                if (std::fabs(r2) < std::fabs(r)) t = t2;
            }
            return t;
        }
        const double d = df(t);
        if (!(std::fabs(d) > kDerivativeFloor))
            throw IllConditioned("implicit-equation derivative vanished");
        const double step = r / d;
        double lambda = 1.0;
        double tn = t - step;
        double rn = f(tn);
        for (int k = 0; k < 30 && !(std::fabs(rn) < std::fabs(r)); ++k) {
            lambda *= 0.5;
            tn = t - lambda * step;
            rn = f(tn);
        }
        if (!(std::fabs(rn) < std::fabs(r)))
            throw NoConvergence("scalar Newton stalled");
        t = tn;
        r = rn;
    }
    if (std::fabs(r) <= cfg.tol) return t;
    throw NoConvergence("scalar Newton ran out of iterations");
}

/// Damped Newton on a 2-dimensional residual. `res` maps a guess to the
/// residual vector, `jac` to the residual derivative matrix.
template <typename R, typename J>
Point2 newton_2d(R&& res, J&& jac, Point2 seed, const SolverConfig& cfg) {
    Point2 z = seed;
    Point2 r = res(z);
    for (int it = 0; it < cfg.max_iter; ++it) {
        if (max_norm(r) <= cfg.tol) {
            const Mat2 A = jac(z);
            if (std::fabs(A.det()) > kDerivativeFloor) {
                const double inv = 1.0 / A.det();
                const Point2 d{inv * (A.a22 * r.x - A.a12 * r.y), inv * (A.a11 * r.y - A.a21 * r.x)};
                const Point2 z2 = z - d;
                const Point2 r2 = res(z2);
                if (max_norm(r2) < max_norm(r)) z = z2;
            }
            return z;
        }
        const Mat2 A = jac(z);
        const double det = A.det();
        if (!(std::fabs(det) > kDerivativeFloor))
            throw IllConditioned("implicit-system matrix is singular");
        const double inv = 1.0 / det;
        const Point2 step{inv * (A.a22 * r.x - A.a12 * r.y), inv * (A.a11 * r.y - A.a21 * r.x)};
        double lambda = 1.0;
        Point2 zn = z - step;
        Point2 rn = res(zn);
        for (int k = 0; k < 30 && !(max_norm(rn) < max_norm(r)); ++k) {
            lambda *= 0.5;
            zn = z - lambda * step;
            rn = res(zn);
        }
        if (!(max_norm(rn) < max_norm(r)))
            throw NoConvergence("2d Newton stalled");
        z = zn;
        r = rn;
    }
    if (max_norm(r) <= cfg.tol) return z;
    throw NoConvergence("2d Newton ran out of iterations");
}

/// In-place LU solve with partial pivoting for the small dense systems of the
/// multi-point orbit Newton. A is n x n row major, b is overwritten with the
/// solution. Returns false when a pivot falls below the floor.
bool lu_solve(std::vector<double>& A, std::vector<double>& b, int n, double pivot_floor = 1e-12);

}  // namespace revhenon

#endif
