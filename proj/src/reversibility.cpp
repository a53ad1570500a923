#include "revhenon/reversibility.hpp"

#include <vector>

#include "revhenon/orbits.hpp"

namespace revhenon {

const char* symmetry_name(SymmetryClass s) {
    switch (s) {
        case SymmetryClass::Symmetric: return "Symmetric";
        case SymmetryClass::CoupleMember: return "CoupleMember";
        default: return "Asymmetric";
    }
}

double reversibility_residual(const MapInstance& map, Point2 p, const SolverConfig& cfg) {
    const Point2 lhs = step(map, p, cfg);
    const Point2 rhs = apply_involution(step_inverse(map, apply_involution(p), cfg));
    return dist_max(lhs, rhs);
}

bool point_sets_match(std::span<const Point2> a, std::span<const Point2> b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const Point2& pa : a) {
        bool hit = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            if (dist_max(pa, b[j]) <= tol) {
                used[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

SymmetryResult classify_symmetry(const Orbit& orbit, std::span<const Orbit> known, double tol) {
    std::vector<Point2> image(orbit.points.size());
    for (std::size_t i = 0; i < orbit.points.size(); ++i) image[i] = apply_involution(orbit.points[i]);

    if (point_sets_match(image, orbit.points, tol)) return {SymmetryClass::Symmetric, -1};

    for (std::size_t k = 0; k < known.size(); ++k) {
        const Orbit& other = known[k];
        if (other.period != orbit.period) continue;
        if (point_sets_match(image, other.points, tol))
            return {SymmetryClass::CoupleMember, static_cast<int>(k)};
    }
    return {SymmetryClass::Asymmetric, -1};
}

}  // namespace revhenon
