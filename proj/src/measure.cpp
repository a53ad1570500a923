#include "revhenon/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "revhenon/errors.hpp"

namespace revhenon {

namespace {

void require_qre1(const MapInstance& map) {
    if (map.family() != Family::QRexample1 && map.family() != Family::Hp1mu)
        throw std::invalid_argument("density: map must be a QRexample1-form instance");
}

}  // namespace

double density(const MapInstance& map, const DensitySpec& spec, Point2 p, const SolverConfig& cfg) {
    require_qre1(map);
    const Point2 image = step(map, p, cfg);
    return (1.0 + spec.v(p.y)) * (1.0 + spec.v(image.y));
}

double transfer_residual(const MapInstance& map, const DensitySpec& spec, Point2 p,
                         const SolverConfig& cfg) {
    require_qre1(map);
    const Point2 image = step(map, p, cfg);
    const double rho_p = (1.0 + spec.v(p.y)) * (1.0 + spec.v(image.y));
    const Point2 pre = step_inverse(map, p, cfg);
    const double rho_pre = density(map, spec, pre, cfg);
    const double J = jacobian_analytic(map, p, image);
    if (std::fabs(J) < 1e-12) throw DenominatorVanishes("transfer_residual: |J| vanished");
    return std::fabs(rho_p - rho_pre / std::fabs(J));
}

}  // namespace revhenon
