#include <doctest.h>

#include <cmath>
#include <random>

#include "catalog_fixtures.hpp"
#include "revhenon/errors.hpp"
#include "revhenon/map.hpp"

using namespace revhenon;
using revhenon::testing::perturbed_catalog;
using revhenon::testing::random_points;

TEST_CASE("polynomial perturbations match central differences") {
    const auto eps = PerturbationSpec::bivariate({{2, 0, 0.4}, {1, 1, -0.7}, {0, 3, 0.2}, {2, 1, 0.05}});
    const auto sep = PerturbationSpec::separable(Polynomial({0.0, 0.0, 0.5}), Polynomial({0.0, 0.0, 0.0, 0.2}));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const double h = 1e-5;
    for (int k = 0; k < 400; ++k) {
        const double x = u(rng), y = u(rng);
        for (const auto* e : {&eps, &sep}) {
            const double fdx = ((*e)(x + h, y) - (*e)(x - h, y)) / (2 * h);
            const double fdy = ((*e)(x, y + h) - (*e)(x, y - h)) / (2 * h);
            CHECK(std::fabs(e->dx(x, y) - fdx) <= 1e-8 * std::max(1.0, std::fabs(fdx)));
            CHECK(std::fabs(e->dy(x, y) - fdy) <= 1e-8 * std::max(1.0, std::fabs(fdy)));
        }
    }
    const auto zero = PerturbationSpec::zero();
    CHECK(zero(3.0, -2.0) == 0.0);
    CHECK(zero.dx(3.0, -2.0) == 0.0);
    CHECK(zero.dy(3.0, -2.0) == 0.0);
}

TEST_CASE("nonlinearity derivative matches finite differences") {
    const auto F = Nonlinearity::polynomial({1.0, -0.3, 0.0, 0.25});
    const auto Fm = Nonlinearity::quadratic_minus(2.0);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const double h = 1e-5;
    for (int k = 0; k < 200; ++k) {
        const double y = u(rng);
        for (const auto* f : {&F, &Fm}) {
            const double fd = ((*f)(y + h) - (*f)(y - h)) / (2 * h);
            CHECK(std::fabs(f->deriv(y) - fd) <= 1e-8 * std::max(1.0, std::fabs(fd)));
        }
    }
}

TEST_CASE("nonorientable family rejects odd nonlinearities") {
    CHECK_THROWS_AS(MapInstance::nonorientable_hat_h_m1(
                        Nonlinearity::polynomial({0.0, 0.0, 0.0, 1.0}), PerturbationSpec::zero()),
                    std::invalid_argument);
    CHECK_NOTHROW(MapInstance::nonorientable_hat_h_m1(Nonlinearity::quadratic_plus(1.0),
                                                      PerturbationSpec::zero()));
}

TEST_CASE("families requiring b reject the strip around b = 0") {
    CHECK_THROWS_AS(MapInstance::t2mu(1.0, 1e-7, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(MapInstance::tilde_h12_inv(Nonlinearity::quadratic_minus(1.0), 0.0,
                                               PerturbationSpec::zero()),
                    std::invalid_argument);
}

TEST_CASE("step rejects non-finite points") {
    const auto m = MapInstance::conservative_h(Nonlinearity::quadratic_minus(1.0));
    CHECK_THROWS_AS(step(m, {std::nan(""), 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(step_inverse(m, {0.0, INFINITY}), std::invalid_argument);
}

TEST_CASE("step rejects a malformed solver config") {
    const auto m = MapInstance::conservative_h(Nonlinearity::quadratic_minus(1.0));
    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(step(m, {0.1, 0.2}, bad), std::invalid_argument);
    bad = SolverConfig{};
    bad.max_iter = 0;
    CHECK_THROWS_AS(step_inverse(m, {0.1, 0.2}, bad), std::invalid_argument);
}

TEST_CASE("step reproduces the listed period-6 points of the quadratic map") {
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
    const Point2 img = step(H, {2.114907541, -1.935432332});
    CHECK(img.x == doctest::Approx(-1.935432332).epsilon(1e-9));
    CHECK(img.y == doctest::Approx(-1.860805853).epsilon(1e-7));

    const auto Hp = MapInstance::hp1mu(4.0, 0.01);
    const Point2 img2 = step(Hp, {1.423687035, 2.107429699});
    CHECK(img2.x == doctest::Approx(2.107429699).epsilon(1e-12));
    CHECK(img2.y == doctest::Approx(-1.911473368).epsilon(1e-7));
}

TEST_CASE("zero perturbation steps equal the unperturbed closed forms exactly") {
    const auto F = Nonlinearity::quadratic_minus(1.1);
    const auto H = MapInstance::conservative_h(F);
    const std::vector<std::pair<std::string, MapInstance>> zeros = {
        {"cross", MapInstance::cross_form_tilde_h(F, PerturbationSpec::zero())},
        {"qr", MapInstance::qr_hat_h(F, PerturbationSpec::zero(), PerturbationSpec::zero())},
        {"qre1", MapInstance::qr_example1(F, PerturbationSpec::zero())},
        {"qre2", MapInstance::qr_example2(F, PerturbationSpec::zero())},
        {"hp1", MapInstance::hp1mu(1.1, 0.0)},
    };
    for (const Point2 p : random_points(100, 2.0, 21)) {
        const Point2 ref = step(H, p);
        for (const auto& [name, m] : zeros) {
            CAPTURE(name);
            const Point2 got = step(m, p);
            CHECK(dist_max(got, ref) == 0.0);  // residual 0 at the Newton seed
        }
    }
}

TEST_CASE("round trip step_inverse(step(p)) = p across the catalog") {
    const SolverConfig cfg;
    for (const auto& [name, m] : perturbed_catalog()) {
        CAPTURE(name);
        double worst = 0.0;
        for (const Point2 p : random_points(1000, 2.0, 33)) {
            const Point2 back = step_inverse(m, step(m, p, cfg), cfg);
            worst = std::max(worst, dist_max(back, p));
        }
        CHECK(worst <= 10.0 * cfg.tol);
    }
}

TEST_CASE("conservative inverse matches the closed form symbol for symbol") {
    const auto F = Nonlinearity::quadratic_minus(0.7);
    const auto H = MapInstance::conservative_h(F);
    for (const Point2 p : random_points(200, 3.0, 5)) {
        const Point2 q = step_inverse(H, p);
        CHECK(q.x == F(p.x) - p.y);
        CHECK(q.y == p.x);
    }
}

TEST_CASE("hm1mu inverse at mu = 0 recovers the preimage exactly") {
    const auto m = MapInstance::hm1mu(1.0, 0.0);
    for (const Point2 p : random_points(200, 2.0, 9)) {
        const Point2 img = step(m, p);  // (-y, -M - x + y^2)
        CHECK(img.x == -p.y);
        const Point2 back = step_inverse(m, img);
        CHECK(dist_max(back, p) < 1e-12);
    }
}

TEST_CASE("implicit-step consistency: defining equations vanish at the returned image") {
    const SolverConfig cfg;
    for (const auto& [name, m] : perturbed_catalog()) {
        CAPTURE(name);
        for (const Point2 p : random_points(200, 2.0, 77)) {
            const Point2 img = step(m, p, cfg);
            CHECK(max_norm(defining_residual(m, p, img)) <= cfg.tol);
        }
    }
}

TEST_CASE("analytic Jacobian against the finite-difference oracle") {
    const SolverConfig cfg;
    for (const auto& [name, m] : perturbed_catalog()) {
        CAPTURE(name);
        double worst = 0.0;
        for (const Point2 p : random_points(500, 2.0, 55)) {
            const Point2 img = step(m, p, cfg);
            const double ja = jacobian_analytic(m, p, img);
            const double jf = jacobian_fd(m, p, cfg).det();
            worst = std::max(worst, std::fabs(ja - jf) / std::max(1.0, std::fabs(ja)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("conservativity at zero perturbation") {
    const auto F = Nonlinearity::quadratic_minus(1.3);
    const auto Fp = Nonlinearity::quadratic_plus(1.0);
    const std::vector<std::pair<MapInstance, double>> cases = {
        {MapInstance::conservative_h(F), 1.0},
        {MapInstance::cross_form_tilde_h(F, PerturbationSpec::zero()), 1.0},
        {MapInstance::tilde_h_m2(F, PerturbationSpec::zero()), 1.0},
        {MapInstance::tilde_h12_inv(F, 0.8, PerturbationSpec::zero()), 1.0},
        {MapInstance::qr_hat_h(F, PerturbationSpec::zero(), PerturbationSpec::zero()), 1.0},
        {MapInstance::t2mu(0.6, -0.7, 0.0), 1.0},
        {MapInstance::nonorientable_hat_h_m1(Fp, PerturbationSpec::zero()), -1.0},
        {MapInstance::hm1mu(1.0, 0.0), -1.0},
    };
    for (const auto& [m, sigma] : cases) {
        CAPTURE(family_name(m.family()));
        int checked_fd = 0;
        for (const Point2 p : random_points(1000, 2.0, 13)) {
            const Point2 img = step(m, p);
            CHECK(std::fabs(jacobian_analytic(m, p, img) - sigma) < 1e-10);
            CHECK(std::fabs(step_differential(m, p, img).det() - sigma) < 1e-10);
            if (++checked_fd <= 50) CHECK(std::fabs(jacobian_fd(m, p).det() - sigma) < 1e-8);
        }
    }
}

TEST_CASE("t2mu Jacobian closed form and mu = 0 reduction") {
    const auto m = MapInstance::t2mu(0.9, -0.8, 0.02);
    for (const Point2 p : random_points(300, 2.0, 3)) {
        const Point2 img = step(m, p);
        const double expect = (1.0 + m.b() * m.mu() * img.y) / (1.0 + m.b() * m.mu() * p.x);
        CHECK(jacobian_analytic(m, p, img) == doctest::Approx(expect).epsilon(1e-14));
    }
    const auto m0 = MapInstance::t2mu(0.9, -0.8, 0.0);
    for (const Point2 p : random_points(50, 2.0, 31)) {
        CHECK(jacobian_analytic(m0, p, step(m0, p)) == 1.0);
    }
}

TEST_CASE("hm1mu Jacobian at the fixed point S1 matches the closed form") {
    const double M = 1.0, mu = 0.01;
    const auto m = MapInstance::hm1mu(M, mu);
    const double a = std::sqrt(M / (1.0 + 2.0 * mu));
    const Point2 S1{-a, a};
    const Point2 img = step(m, S1);
    CHECK(dist_max(img, S1) < 1e-13);
    const double J = jacobian_analytic(m, S1, img);
    const double closed = -1.0 - 2.0 * mu * std::sqrt(M) / (std::sqrt(1.0 + 2.0 * mu) - mu * std::sqrt(M));
    CHECK(J == doctest::Approx(closed).epsilon(1e-12));
}

TEST_CASE("cross-form quotient structure uses one scalar function with swapped arguments") {
    const auto eps = PerturbationSpec::bivariate({{2, 0, 0.02}, {1, 1, 0.03}});
    const auto F = Nonlinearity::quadratic_minus(1.3);
    const std::vector<MapInstance> maps = {
        MapInstance::tilde_h_m2(F, eps),
        MapInstance::tilde_h12_inv(F, 0.8, eps),
        MapInstance::t2mu(0.6, -0.7, 0.03),
    };
    for (const auto& m : maps) {
        CAPTURE(family_name(m.family()));
        for (const Point2 p : random_points(200, 2.0, 41)) {
            const Point2 img = step(m, p);
            const double quotient = cross_form_gx(m, p.x, img.y) / cross_form_gx(m, img.y, p.x);
            CHECK(jacobian_analytic(m, p, img) == doctest::Approx(quotient).epsilon(1e-14));
        }
    }
    // CrossFormTildeH shares its quotient term through F' and eps_x directly
    const auto mt = MapInstance::cross_form_tilde_h(F, eps);
    for (const Point2 p : random_points(200, 2.0, 43)) {
        const Point2 img = step(mt, p);
        const double w = p.y - eps(img.y, p.x);
        auto term = [&](double u, double v) { return 1.0 + F.deriv(w) * eps.dx(u, v); };
        CHECK(jacobian_analytic(mt, p, img) ==
              doctest::Approx(term(p.x, img.y) / term(img.y, p.x)).epsilon(1e-14));
    }
}

TEST_CASE("hp1mu per-step determinant matches the quadratic-perturbation form") {
    const double mu = 0.01;
    const auto m = MapInstance::hp1mu(4.0, mu);
    for (const Point2 p : revhenon::testing::o6_points_mu001()) {
        const Point2 img = step(m, p);
        const double expect = (1.0 + mu * p.y + 2.0 * mu * p.x) / (1.0 + mu * p.y + 2.0 * mu * img.y);
        CHECK(std::fabs(jacobian_fd(m, p).det() - expect) < 1e-7);
    }
}

TEST_CASE("breakdown of the implicit derivative reports IllConditioned") {
    // eps(u, v) = u makes G_u of the cross form vanish identically
    const auto m = MapInstance::tilde_h_m2(Nonlinearity::quadratic_minus(1.0),
                                           PerturbationSpec::bivariate({{1, 0, 1.0}}));
    CHECK_THROWS_AS(step(m, {0.3, 0.2}), IllConditioned);
}

TEST_CASE("leaving the perturbative regime reports NoConvergence") {
    const auto m = MapInstance::qr_example1(Nonlinearity::quadratic_minus(1.0),
                                            PerturbationSpec::bivariate({{4, 0, 0.8}}));
    CHECK_THROWS_AS(step(m, {40.0, 40.0}), NumericsError);
}
