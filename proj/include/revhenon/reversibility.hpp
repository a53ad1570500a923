#ifndef REVHENON_REVERSIBILITY_HPP
#define REVHENON_REVERSIBILITY_HPP

#include <span>

#include "revhenon/map.hpp"

namespace revhenon {

struct Orbit;

/// How an orbit sits relative to the involution h: (x,y) -> (y,x).
enum class SymmetryClass { Symmetric, CoupleMember, Asymmetric };

const char* symmetry_name(SymmetryClass s);

/// The involution h.
inline Point2 apply_involution(Point2 p) { return {p.y, p.x}; }

/// || step(p) - h(step_inverse(h(p))) ||_inf. Zero (to solver accuracy) exactly
/// when the map satisfies f = h o f^{-1} o h; the certificate of reversibility.
double reversibility_residual(const MapInstance& map, Point2 p, const SolverConfig& cfg = {});

/// Unordered point-set comparison within tol in the max-norm.
bool point_sets_match(std::span<const Point2> a, std::span<const Point2> b, double tol);

struct SymmetryResult {
    SymmetryClass cls = SymmetryClass::Asymmetric;
    int partner = -1;  // index into `known` when cls == CoupleMember
};

/// Compares the h-image of the orbit's point set with its own set (Symmetric),
/// with each same-period orbit in `known` (CoupleMember), else Asymmetric.
SymmetryResult classify_symmetry(const Orbit& orbit, std::span<const Orbit> known, double tol = 1e-8);

}  // namespace revhenon

#endif
