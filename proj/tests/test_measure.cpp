#include <doctest.h>

#include <cmath>

#include "catalog_fixtures.hpp"
#include "revhenon/measure.hpp"
#include "revhenon/orbits.hpp"

using namespace revhenon;
using revhenon::testing::random_points;

namespace {

MapInstance separable_map(double a_p, double a_q) {
    // eps1(u, v) = a_p u^2 + a_q v^3, so v(x) = 2 a_p x
    return MapInstance::qr_example1(
        Nonlinearity::quadratic_minus(1.0),
        PerturbationSpec::separable(Polynomial({0.0, 0.0, a_p}), Polynomial({0.0, 0.0, 0.0, a_q})));
}

DensitySpec density_for(double a_p) { return DensitySpec{Polynomial({0.0, 2.0 * a_p})}; }

}  // namespace

TEST_CASE("density trivials") {
    const auto m = separable_map(0.05, 0.02);
    SUBCASE("v = 0 gives the flat density") {
        const DensitySpec flat{Polynomial{}};
        for (const Point2 p : random_points(50, 2.0, 3)) CHECK(density(m, flat, p) == 1.0);
    }
    SUBCASE("direct evaluation for v = 0.1 y") {
        const DensitySpec spec{Polynomial({0.0, 0.1})};
        for (const Point2 p : random_points(50, 2.0, 5)) {
            const Point2 img = step(m, p);
            CHECK(density(m, spec, p) ==
                  doctest::Approx((1.0 + 0.1 * p.y) * (1.0 + 0.1 * img.y)).epsilon(1e-15));
        }
    }
    SUBCASE("positivity on the working box for small coefficients") {
        const auto spec = density_for(0.05);
        for (const Point2 p : random_points(200, 2.0, 7)) CHECK(density(m, spec, p) > 0.0);
    }
}

TEST_CASE("the separable density is a transfer-operator fixed point") {
    const auto m = separable_map(0.05, 0.02);
    const auto spec = density_for(0.05);
    double worst = 0.0;
    for (const Point2 p : random_points(1000, 1.5, 11))
        worst = std::max(worst, transfer_residual(m, spec, p));
    CHECK(worst <= 1e-10);
}

TEST_CASE("v = 0 with zero perturbation gives residual 0 up to rounding") {
    const auto m = MapInstance::qr_example1(Nonlinearity::quadratic_minus(1.0),
                                            PerturbationSpec::zero());
    const DensitySpec flat{Polynomial{}};
    for (const Point2 p : random_points(100, 2.0, 13))
        CHECK(transfer_residual(m, flat, p) < 1e-14);
}

TEST_CASE("non-separable perturbations fail the identity") {
    // eps1 = 0.05 x^2 y is not a sum p(x) + q(y)
    const auto m = MapInstance::qr_example1(Nonlinearity::quadratic_minus(1.0),
                                            PerturbationSpec::bivariate({{2, 1, 0.05}}));
    SUBCASE("with the flat candidate density") {
        const DensitySpec flat{Polynomial{}};
        double best = 0.0;
        for (const Point2 p : random_points(200, 1.5, 17))
            best = std::max(best, transfer_residual(m, flat, p));
        CHECK(best > 1e-4);
    }
    SUBCASE("with the density the separable recipe would suggest") {
        const DensitySpec spec{Polynomial({0.0, 0.1})};
        double best = 0.0;
        for (const Point2 p : random_points(200, 1.5, 19))
            best = std::max(best, transfer_residual(m, spec, p));
        CHECK(best > 1e-4);
    }
}

TEST_CASE("density machinery rejects other families") {
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(1.0));
    const DensitySpec flat{Polynomial{}};
    CHECK_THROWS_AS(density(H, flat, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("cycle Jacobians telescope for every orbit of a valid pair") {
    const auto m = separable_map(0.05, 0.02);
    int checked = 0;
    for (int n = 1; n <= 6; ++n) {
        for (const Orbit& o : brute_force_seeds(m, n, {-2.5, 2.5, -2.5, 2.5, 50})) {
            CHECK(std::fabs(cycle_jacobian(m, o) - 1.0) <= 1e-10);
            ++checked;
        }
    }
    CHECK(checked >= 4);
}

TEST_CASE("transfer residual is h-conjugation invariant on valid pairs") {
    const auto m = separable_map(0.04, 0.01);
    const auto spec = density_for(0.04);
    for (const Point2 p : random_points(200, 1.5, 23)) {
        const double a = transfer_residual(m, spec, p);
        const double b = transfer_residual(m, spec, apply_involution(p));
        CHECK(std::fabs(a - b) <= 1e-10);
    }
}
