#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "catalog_fixtures.hpp"
#include "revhenon/bifurcations.hpp"
#include "revhenon/errors.hpp"
#include "revhenon/orbits.hpp"

using namespace revhenon;

namespace {

const double kO6Mu0[6] = {2.114907541, -1.935432332, -1.860805853,
                          2.472833909, -0.254101688, 1.462598423};
const double kO6Mu001[6] = {2.107429699, -1.911473368, -1.833980679,
                            2.460965013, -0.2062196180, 1.423687035};

double worst_y_error(const Orbit& o, const double* ys) {
    // orbit phase is preserved by find_orbit; compare y-coordinates in order
    double worst = 0.0;
    for (int i = 0; i < o.period; ++i) worst = std::max(worst, std::fabs(o.points[i].y - ys[i]));
    return worst;
}

}  // namespace

TEST_CASE("find_orbit reproduces the listed period-6 orbits") {
    SUBCASE("unperturbed, M = 4") {
        const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
        const Orbit o = find_orbit(H, 6, revhenon::testing::o6_points_mu0());
        CHECK(o.residual <= 1e-13);
        CHECK(worst_y_error(o, kO6Mu0) < 1e-8);
        CHECK(o.cycle_det == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("perturbed, mu = 0.01") {
        const auto m = MapInstance::hp1mu(4.0, 0.01);
        const Orbit o = find_orbit(m, 6, revhenon::testing::o6_points_mu001());
        CHECK(o.residual <= 1e-13);
        CHECK(worst_y_error(o, kO6Mu001) < 1e-8);
        CHECK(o.cycle_det == doctest::Approx(0.9999999555).epsilon(1e-8));
    }
}

TEST_CASE("fixed points of the orientable quadratic map match the closed form") {
    for (const double M : {0.5, 1.0, 4.0}) {
        const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(M));
        for (const double sign : {-1.0, 1.0}) {
            const double y = -1.0 + sign * std::sqrt(1.0 + M);
            const Point2 seed{y + 1e-3, y - 1e-3};
            const Orbit o = find_orbit(H, 1, std::vector<Point2>{seed});
            CHECK(o.points[0].x == doctest::Approx(y).epsilon(1e-10));
            CHECK(o.points[0].y == doctest::Approx(y).epsilon(1e-10));
        }
    }
}

TEST_CASE("non-primitive solutions are rejected") {
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
    const double y = -1.0 + std::sqrt(5.0);
    std::vector<Point2> seed(6, Point2{y, y});  // the fixed point as a fake 6-orbit
    CHECK_THROWS_AS(find_orbit(H, 6, seed), NonPrimitive);
}

TEST_CASE("telescoping cycle Jacobian for separable perturbations") {
    const auto eps = PerturbationSpec::separable(Polynomial({0.0, 0.0, 0.05}),
                                                 Polynomial({0.0, 0.0, 0.0, 0.02}));
    const auto m = MapInstance::qr_example1(Nonlinearity::quadratic_minus(1.0), eps);
    int found = 0;
    for (int n = 1; n <= 8; ++n) {
        const auto orbits = brute_force_seeds(m, n, {-2.5, 2.5, -2.5, 2.5, 60});
        for (const Orbit& o : orbits) {
            CHECK(std::fabs(cycle_jacobian(m, o) - 1.0) < 1e-10);
            ++found;
        }
    }
    CHECK(found > 5);  // fixed points, the 2-orbit, resonant orbits...
}

TEST_CASE("multipliers of the symmetric period-6 orbit match the trace polynomial") {
    const double M = 2.0;
    const Orbit o = symmetric_period6_closed_form(M, 1);
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(M));
    const Multipliers mult = multipliers(H, o);
    CHECK(mult.det == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mult.trace == doctest::Approx(trace_polynomial(std::sqrt(M + 1.0))).epsilon(1e-6));
}

TEST_CASE("parabolic birth of the fixed point at M = -1") {
    for (const double M : {-0.999, -0.99, -0.9}) {
        const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(M));
        const double y = -1.0 + std::sqrt(1.0 + M);
        const Orbit o = find_orbit(H, 1, std::vector<Point2>{{y, y}});
        CHECK(std::fabs(o.trace - 2.0) < 3.0 * std::sqrt(M + 1.0));
    }
}

TEST_CASE("elliptic multipliers sit on the unit circle") {
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(1.0));
    const double y = -1.0 + std::sqrt(2.0);
    const Orbit o = find_orbit(H, 1, std::vector<Point2>{{y, y}});
    const Multipliers m = multipliers(H, o);
    CHECK(std::fabs(std::abs(m.ev1) - 1.0) < 1e-9);
    CHECK(std::fabs(std::abs(m.ev2) - 1.0) < 1e-9);
    CHECK(std::fabs(m.trace) < 2.0);
    CHECK(o.stability == StabilityType::Elliptic);
}

TEST_CASE("classify_stability table") {
    CHECK(classify_stability(3.0, 1.0) == StabilityType::Saddle);
    CHECK(classify_stability(1.0, 1.0) == StabilityType::Elliptic);
    CHECK(classify_stability(2.0, 1.0) == StabilityType::Parabolic);
    CHECK(classify_stability(0.5, 0.9999) == StabilityType::Sink);
    CHECK(classify_stability(0.5, 1.0001) == StabilityType::Source);
    CHECK(classify_stability(0.3, -1.0) == StabilityType::NonorientableSaddle);
    CHECK(classify_stability(-2.0, 1.0) == StabilityType::Parabolic);
}

TEST_CASE("brute force census examples") {
    SUBCASE("M = 4 finds the couple and the symmetric orbit") {
        const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
        auto orbits = brute_force_seeds(H, 6, {-3.5, 3.5, -3.5, 3.5, 200});
        CHECK(orbits.size() >= 3);
        const Orbit o61 = find_orbit(H, 6, revhenon::testing::o6_points_mu0());
        const Orbit tilde = symmetric_period6_closed_form(4.0, 1);
        bool saw_o61 = false, saw_tilde = false;
        int couple_members = 0;
        for (std::size_t i = 0; i < orbits.size(); ++i) {
            if (orbit_distance(orbits[i], o61) < 1e-6) saw_o61 = true;
            if (orbit_distance(orbits[i], tilde) < 1e-6) saw_tilde = true;
            const SymmetryResult r = classify_symmetry(orbits[i], orbits, 1e-7);
            if (r.cls == SymmetryClass::CoupleMember) ++couple_members;
        }
        CHECK(saw_o61);
        CHECK(saw_tilde);
        CHECK(couple_members == 2);
    }
    SUBCASE("no period-3 orbits before their birth at M = 1") {
        const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(0.5));
        CHECK(brute_force_seeds(H, 3, {-3.0, 3.0, -3.0, 3.0, 80}).empty());
    }
    SUBCASE("fixed points match closed forms for any map") {
        const auto m = MapInstance::hm1mu(1.0, 0.05);
        auto fps = brute_force_seeds(m, 1, {-3.0, 3.0, -3.0, 3.0, 60});
        REQUIRE(fps.size() == 2);
        const auto closed = hm1mu_fixed_points(1.0, 0.05);
        CHECK(dist_max(fps[0].points[0], closed.S1) < 1e-10);
        CHECK(dist_max(fps[1].points[0], closed.S2) < 1e-10);
    }
}

TEST_CASE("brute force output is deterministic") {
    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
    const auto a = brute_force_seeds(H, 3, {-3.0, 3.0, -3.0, 3.0, 50});
    const auto b = brute_force_seeds(H, 3, {-3.0, 3.0, -3.0, 3.0, 50});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(orbit_distance(a[i], b[i]) == 0.0);
}

TEST_CASE("orbit points are stable under a tighter solver tolerance") {
    const auto m = MapInstance::hp1mu(4.0, 0.01);
    SolverConfig loose;
    SolverConfig tight;
    tight.tol = loose.tol * 0.1;
    const Orbit a = find_orbit(m, 6, revhenon::testing::o6_points_mu001(), loose);
    const Orbit b = find_orbit(m, 6, revhenon::testing::o6_points_mu001(), tight);
    CHECK(orbit_distance(a, b) < 1e-9);
}

TEST_CASE("h-conjugacy: the h-image orbit carries the reciprocal multipliers") {
    // h conjugates f to f^{-1}, so the couple partner's cycle matrix is
    // similar to the inverse: det -> 1/det and trace -> trace/det. At mu = 0
    // (det = 1) the traces coincide.
    const auto m = MapInstance::hp1mu(4.0, 0.01);
    const Orbit o1 = find_orbit(m, 6, revhenon::testing::o6_points_mu001());
    std::vector<Point2> himg(o1.points.size());
    for (std::size_t i = 0; i < o1.points.size(); ++i) himg[i] = apply_involution(o1.points[i]);
    std::reverse(himg.begin(), himg.end());
    const Orbit o2 = find_orbit(m, 6, himg);
    CHECK(o2.det == doctest::Approx(1.0 / o1.det).epsilon(1e-9));
    CHECK(o2.trace == doctest::Approx(o1.trace / o1.det).epsilon(1e-9));
    // reversible pairing of the cycle Jacobians
    CHECK(o1.cycle_det * o2.cycle_det == doctest::Approx(1.0).epsilon(1e-9));

    const auto m0 = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
    const Orbit c1 = find_orbit(m0, 6, revhenon::testing::o6_points_mu0());
    std::vector<Point2> himg0(c1.points.size());
    for (std::size_t i = 0; i < c1.points.size(); ++i) himg0[i] = apply_involution(c1.points[i]);
    std::reverse(himg0.begin(), himg0.end());
    const Orbit c2 = find_orbit(m0, 6, himg0);
    CHECK(c2.trace == doctest::Approx(c1.trace).epsilon(1e-9));
    CHECK(std::fabs(c2.det - c1.det) < 1e-9);
}

TEST_CASE("chained determinant equals the product of per-step determinants") {
    const auto m = MapInstance::hp1mu(4.0, 0.01);
    const Orbit op = find_orbit(m, 6, revhenon::testing::o6_points_mu001());
    CHECK(std::fabs(op.det - op.cycle_det) < 1e-9 * std::max(1.0, std::fabs(op.det)));

    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(4.0));
    const Orbit o = find_orbit(H, 6, revhenon::testing::o6_points_mu0());
    CHECK(std::fabs(o.det - o.cycle_det) < 1e-9);
}

TEST_CASE("second-perturbation suitability: symmetric d2-eps telescopes, u*v does not") {
    const auto F = Nonlinearity::quadratic_minus(1.0);
    // eps2 = u v^2 has a symmetric second partial (2uv), so every cycle
    // Jacobian collapses to 1 even though the pointwise Jacobian varies
    const auto telescoping =
        MapInstance::qr_example2(F, PerturbationSpec::bivariate({{1, 2, 0.05}}));
    // eps2 = alpha u v leaves the cycle Jacobians genuinely non-conservative
    const auto suitable = MapInstance::qr_example2(F, PerturbationSpec::bivariate({{1, 1, 0.05}}));

    double telescoped_worst = 0.0;
    for (int n = 1; n <= 4; ++n)
        for (const Orbit& o : brute_force_seeds(telescoping, n, {-2.2, 2.2, -2.2, 2.2, 50}))
            telescoped_worst =
                std::max(telescoped_worst, std::fabs(cycle_jacobian(telescoping, o) - 1.0));
    CHECK(telescoped_worst < 1e-10);

    double best_deviation = 0.0;
    for (int n = 2; n <= 4; ++n)
        for (const Orbit& o : brute_force_seeds(suitable, n, {-2.2, 2.2, -2.2, 2.2, 50}))
            best_deviation = std::max(best_deviation, std::fabs(cycle_jacobian(suitable, o) - 1.0));
    CHECK(best_deviation > 1e-6);
}

TEST_CASE("orbit machinery on the two-perturbation construction") {
    const auto m = MapInstance::qr_hat_h(
        Nonlinearity::quadratic_minus(1.3),
        PerturbationSpec::bivariate({{2, 0, 0.02}, {1, 1, 0.03}}),
        PerturbationSpec::bivariate({{1, 1, 0.03}, {0, 2, 0.02}}));
    auto fixed = brute_force_seeds(m, 1, {-3.0, 3.0, -3.0, 3.0, 60});
    REQUIRE(fixed.size() >= 1);
    for (const Orbit& o : fixed) {
        CHECK(o.residual <= 1e-13);
        // chained differential against a finite-difference composite
        const Mat2 fd = jacobian_fd(m, o.points[0]);
        CHECK(std::fabs(fd.det() - o.det) < 1e-6);
        CHECK(std::fabs(fd.trace() - o.trace) < 1e-6);
    }
}

TEST_CASE("symmetric orbits intersect the symmetry line as the period's parity demands") {
    // checked for catalog-produced orbits only
    const auto count_on_line = [](const Orbit& o) {
        int c = 0;
        for (const Point2& p : o.points)
            if (std::fabs(p.x - p.y) < 1e-9) ++c;
        return c;
    };
    const Orbit even = symmetric_period6_closed_form(2.0, 1);
    CHECK(count_on_line(even) == 2);

    const auto H = MapInstance::conservative_h(Nonlinearity::quadratic_minus(1.0));
    const double y = -1.0 + std::sqrt(2.0);
    const Orbit odd = find_orbit(H, 1, std::vector<Point2>{{y, y}});
    CHECK(count_on_line(odd) == 1);
}
