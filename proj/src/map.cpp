#include "revhenon/map.hpp"

#include <cmath>
#include <stdexcept>

#include "revhenon/errors.hpp"

namespace revhenon {

namespace {

// Structural kind: which set of defining equations a family evaluates.
enum class StructKind { ExplicitH, CrossTilde, CrossG, QR2D, QRe1, QRe2, NonorientH };

StructKind struct_kind(Family f) {
    switch (f) {
        case Family::ConservativeH: return StructKind::ExplicitH;
        case Family::CrossFormTildeH: return StructKind::CrossTilde;
        case Family::TildeHm2:
        case Family::TildeH12inv:
        case Family::T2mu: return StructKind::CrossG;
        case Family::QRhatH: return StructKind::QR2D;
        case Family::QRexample1:
        case Family::Hp1mu: return StructKind::QRe1;
        case Family::QRexample2: return StructKind::QRe2;
        default: return StructKind::NonorientH;  // NonorientableHatHm1, Hm1mu
    }
}

void require_finite(Point2 p) {
    if (!finite(p)) throw std::invalid_argument("non-finite point");
}

constexpr double kMinAbsB = 1e-6;  // the strip around b = 0 is excluded

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::ConservativeH: return "conservative-h";
        case Family::CrossFormTildeH: return "cross-form-tilde-h";
        case Family::TildeHm2: return "tilde-h-m2";
        case Family::TildeH12inv: return "tilde-h12-inv";
        case Family::QRhatH: return "qr-hat-h";
        case Family::QRexample1: return "qr-example1";
        case Family::QRexample2: return "qr-example2";
        case Family::NonorientableHatHm1: return "nonorientable-hat-h-m1";
        case Family::T2mu: return "t2mu";
        case Family::Hm1mu: return "hm1mu";
        case Family::Hp1mu: return "hp1mu";
    }
    return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
    for (Family f : {Family::ConservativeH, Family::CrossFormTildeH, Family::TildeHm2,
                     Family::TildeH12inv, Family::QRhatH, Family::QRexample1, Family::QRexample2,
                     Family::NonorientableHatHm1, Family::T2mu, Family::Hm1mu, Family::Hp1mu})
        if (name == family_name(f)) return f;
    return std::nullopt;
}

// ------------------------------------------------------------------
// factories
// ------------------------------------------------------------------

MapInstance MapInstance::conservative_h(Nonlinearity F) {
    return MapInstance(Family::ConservativeH, std::move(F), 0.0, 0.0, {}, {});
}

MapInstance MapInstance::cross_form_tilde_h(Nonlinearity F, PerturbationSpec eps) {
    return MapInstance(Family::CrossFormTildeH, std::move(F), 0.0, 0.0, std::move(eps), {});
}

MapInstance MapInstance::tilde_h_m2(Nonlinearity F, PerturbationSpec eps) {
    return MapInstance(Family::TildeHm2, std::move(F), 0.0, 0.0, std::move(eps), {});
}

MapInstance MapInstance::tilde_h12_inv(Nonlinearity F, double b, PerturbationSpec eps) {
    if (std::fabs(b) < kMinAbsB) throw std::invalid_argument("tilde_h12_inv: |b| below 1e-6");
    return MapInstance(Family::TildeH12inv, std::move(F), b, 0.0, std::move(eps), {});
}

MapInstance MapInstance::qr_hat_h(Nonlinearity F, PerturbationSpec eps1, PerturbationSpec eps2) {
    return MapInstance(Family::QRhatH, std::move(F), 0.0, 0.0, std::move(eps1), std::move(eps2));
}

MapInstance MapInstance::qr_example1(Nonlinearity F, PerturbationSpec eps1) {
    return MapInstance(Family::QRexample1, std::move(F), 0.0, 0.0, std::move(eps1), {});
}

MapInstance MapInstance::qr_example2(Nonlinearity F, PerturbationSpec eps2) {
    return MapInstance(Family::QRexample2, std::move(F), 0.0, 0.0, {}, std::move(eps2));
}

MapInstance MapInstance::nonorientable_hat_h_m1(Nonlinearity F, PerturbationSpec eps) {
    if (!F.is_even()) throw std::invalid_argument("nonorientable family needs an even F");
    return MapInstance(Family::NonorientableHatHm1, std::move(F), 0.0, 0.0, std::move(eps), {});
}

MapInstance MapInstance::t2mu(double M, double b, double mu) {
    if (std::fabs(b) < kMinAbsB) throw std::invalid_argument("t2mu: |b| below 1e-6");
    PerturbationSpec eps = mu == 0.0 ? PerturbationSpec::zero()
                                     : PerturbationSpec::bivariate({{1, 1, mu}});
    return MapInstance(Family::T2mu, Nonlinearity::quadratic_minus(M), b, mu, std::move(eps), {});
}

MapInstance MapInstance::hm1mu(double M, double mu) {
    PerturbationSpec eps = mu == 0.0 ? PerturbationSpec::zero()
                                     : PerturbationSpec::bivariate({{1, 1, mu}});
    return MapInstance(Family::Hm1mu, Nonlinearity::quadratic_plus(M), 0.0, mu, std::move(eps), {});
}

MapInstance MapInstance::hp1mu(double M, double mu) {
    PerturbationSpec eps = mu == 0.0 ? PerturbationSpec::zero()
                                     : PerturbationSpec::bivariate({{1, 1, mu}, {2, 0, mu}});
    return MapInstance(Family::Hp1mu, Nonlinearity::quadratic_minus(M), 0.0, mu, std::move(eps), {});
}

double MapInstance::orientation() const {
    return struct_kind(family_) == StructKind::NonorientH ? -1.0 : 1.0;
}

// ------------------------------------------------------------------
// cross-form scalar function G and its partials
// ------------------------------------------------------------------

namespace {

double cross_G(const MapInstance& m, double u, double v) {
    const auto& e = m.eps1();
    if (m.family() == Family::TildeHm2) return -u + m.F()(v) + e(u, v);
    return (u - m.F()(v)) / m.b() + e(u, v);  // TildeH12inv, T2mu
}

double cross_Gu(const MapInstance& m, double u, double v) {
    const auto& e = m.eps1();
    if (m.family() == Family::TildeHm2) return -1.0 + e.dx(u, v);
    return 1.0 / m.b() + e.dx(u, v);
}

double cross_Gv(const MapInstance& m, double u, double v) {
    const auto& e = m.eps1();
    if (m.family() == Family::TildeHm2) return m.F().deriv(v) + e.dy(u, v);
    return -m.F().deriv(v) / m.b() + e.dy(u, v);
}

// Unperturbed forward image; the Newton seed for every implicit solve.
Point2 unperturbed_image(const MapInstance& m, Point2 p) {
    const auto& F = m.F();
    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
        case StructKind::CrossTilde:
        case StructKind::QR2D:
        case StructKind::QRe1:
        case StructKind::QRe2: return {p.y, -p.x + F(p.y)};
        case StructKind::NonorientH: return {-p.y, -p.x + F(p.y)};
        case StructKind::CrossG: {
            if (m.family() == Family::TildeHm2) {
                const double yb = -p.y + F(p.x);
                return {-p.x + F(yb), yb};
            }
            const double yb = m.b() * p.y + F(p.x);
            return {(p.x - F(yb)) / m.b(), yb};
        }
    }
    return p;
}

// Unperturbed preimage; the Newton seed for every inverse solve.
Point2 unperturbed_preimage(const MapInstance& m, Point2 p) {
    const auto& F = m.F();
    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
        case StructKind::CrossTilde:
        case StructKind::QR2D:
        case StructKind::QRe1:
        case StructKind::QRe2: return {F(p.x) - p.y, p.x};
        case StructKind::NonorientH: return {F(-p.x) - p.y, -p.x};
        case StructKind::CrossG: {
            if (m.family() == Family::TildeHm2) {
                const double xb = F(p.y) - p.x;
                return {xb, F(xb) - p.y};
            }
            const double xb = m.b() * p.x + F(p.y);
            return {xb, m.b() * p.y + F(xb)};
        }
    }
    return p;
}

}  // namespace

// ------------------------------------------------------------------
// defining relation R(p, image) = 0 and its partial derivatives
// ------------------------------------------------------------------

Point2 defining_residual(const MapInstance& m, Point2 p, Point2 q) {
    const auto& F = m.F();
    const auto& e1 = m.eps1();
    const auto& e2 = m.eps2();
    const double x = p.x, y = p.y, xb = q.x, yb = q.y;
    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
            return {xb - y, yb + x - F(y)};
        case StructKind::CrossTilde:
            return {xb - y - e1(x, yb) + e1(yb, x), yb + x - F(y - e1(yb, x))};
        case StructKind::CrossG:
            return {xb - cross_G(m, x, yb), y - cross_G(m, yb, x)};
        case StructKind::QR2D:
            return {xb - y - e2(x, y) + e2(yb, xb),
                    yb + x - F(y + e2(x, y)) + e1(x, y) + e1(yb, xb)};
        case StructKind::QRe1:
            return {xb - y, yb + x - F(y) + e1(x, y) + e1(yb, xb)};
        case StructKind::QRe2:
            return {xb - y - e2(x, y) + e2(yb, xb), yb + x - F(y + e2(x, y))};
        case StructKind::NonorientH:
            return {xb + y, yb + x - F(y) + e1(x, y) + e1(yb, xb)};
    }
    return {};
}

Mat2 relation_dimage(const MapInstance& m, Point2 p, Point2 q) {
    const auto& F = m.F();
    const auto& e1 = m.eps1();
    const auto& e2 = m.eps2();
    const double x = p.x, y = p.y, xb = q.x, yb = q.y;
    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
            return {1, 0, 0, 1};
        case StructKind::CrossTilde: {
            const double Fp = F.deriv(y - e1(yb, x));
            return {1, -e1.dy(x, yb) + e1.dx(yb, x), 0, 1 + Fp * e1.dx(yb, x)};
        }
        case StructKind::CrossG:
            return {1, -cross_Gv(m, x, yb), 0, -cross_Gu(m, yb, x)};
        case StructKind::QR2D:
            return {1 + e2.dy(yb, xb), e2.dx(yb, xb), e1.dy(yb, xb), 1 + e1.dx(yb, xb)};
        case StructKind::QRe1:
            return {1, 0, e1.dy(yb, xb), 1 + e1.dx(yb, xb)};
        case StructKind::QRe2:
            return {1 + e2.dy(yb, xb), e2.dx(yb, xb), 0, 1};
        case StructKind::NonorientH:
            return {1, 0, e1.dy(yb, xb), 1 + e1.dx(yb, xb)};
    }
    return {};
}

Mat2 relation_dpoint(const MapInstance& m, Point2 p, Point2 q) {
    const auto& F = m.F();
    const auto& e1 = m.eps1();
    const auto& e2 = m.eps2();
    const double x = p.x, y = p.y, yb = q.y;
    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
            return {0, -1, 1, -F.deriv(y)};
        case StructKind::CrossTilde: {
            const double Fp = F.deriv(y - e1(yb, x));
            return {-e1.dx(x, yb) + e1.dy(yb, x), -1, 1 + Fp * e1.dy(yb, x), -Fp};
        }
        case StructKind::CrossG:
            return {-cross_Gu(m, x, yb), 0, -cross_Gv(m, yb, x), 1};
        case StructKind::QR2D: {
            const double Fp = F.deriv(y + e2(x, y));
            return {-e2.dx(x, y), -1 - e2.dy(x, y),
                    1 - Fp * e2.dx(x, y) + e1.dx(x, y), -Fp * (1 + e2.dy(x, y)) + e1.dy(x, y)};
        }
        case StructKind::QRe1:
            return {0, -1, 1 + e1.dx(x, y), -F.deriv(y) + e1.dy(x, y)};
        case StructKind::QRe2: {
            const double Fp = F.deriv(y + e2(x, y));
            return {-e2.dx(x, y), -1 - e2.dy(x, y), 1 - Fp * e2.dx(x, y), -Fp * (1 + e2.dy(x, y))};
        }
        case StructKind::NonorientH:
            return {0, 1, 1 + e1.dx(x, y), -F.deriv(y) + e1.dy(x, y)};
    }
    return {};
}

// ------------------------------------------------------------------
// step / step_inverse
// ------------------------------------------------------------------

Point2 step(const MapInstance& m, Point2 p, const SolverConfig& cfg) {
    require_finite(p);
    validate(cfg);
    const auto& F = m.F();
    const auto& e1 = m.eps1();
    const auto& e2 = m.eps2();
    const double x = p.x, y = p.y;
    const Point2 seed = unperturbed_image(m, p);

    switch (struct_kind(m.family())) {
        case StructKind::ExplicitH:
            return seed;
        case StructKind::CrossTilde: {
            if (e1.is_zero()) return seed;
            const double yb = newton_scalar(
                [&](double t) { return t + x - F(y - e1(t, x)); },
                [&](double t) { return 1.0 + F.deriv(y - e1(t, x)) * e1.dx(t, x); }, seed.y, cfg);
            return {y + e1(x, yb) - e1(yb, x), yb};
        }
        case StructKind::CrossG: {
            if (e1.is_zero()) return seed;
            const double yb = newton_scalar(
                [&](double t) { return cross_G(m, t, x) - y; },
                [&](double t) { return cross_Gu(m, t, x); }, seed.y, cfg);
            return {cross_G(m, x, yb), yb};
        }
        case StructKind::QR2D: {
            if (e1.is_zero() && e2.is_zero()) return seed;
            return newton_2d(
                [&](Point2 q) { return defining_residual(m, p, q); },
                [&](Point2 q) { return relation_dimage(m, p, q); }, seed, cfg);
        }
        case StructKind::QRe1: {
            if (e1.is_zero()) return seed;
            const double xb = y;
            const double yb = newton_scalar(
                [&](double t) { return t + x - F(y) + e1(x, y) + e1(t, xb); },
                [&](double t) { return 1.0 + e1.dx(t, xb); }, seed.y, cfg);
            return {xb, yb};
        }
        case StructKind::QRe2: {
            if (e2.is_zero()) return seed;
            const double yb = -x + F(y + e2(x, y));
            const double xb = newton_scalar(
                [&](double s) { return s - y - e2(x, y) + e2(yb, s); },
                [&](double s) { return 1.0 + e2.dy(yb, s); }, y, cfg);
            return {xb, yb};
        }
        case StructKind::NonorientH: {
            const double xb = -y;
            if (e1.is_zero()) return seed;
            const double yb = newton_scalar(
                [&](double t) { return t + x - F(y) + e1(x, y) + e1(t, xb); },
                [&](double t) { return 1.0 + e1.dx(t, xb); }, seed.y, cfg);
            return {xb, yb};
        }
    }
    return seed;
}

Point2 step_inverse(const MapInstance& m, Point2 p, const SolverConfig& cfg) {
    require_finite(p);
    validate(cfg);
    const Point2 seed = unperturbed_preimage(m, p);
    if (struct_kind(m.family()) == StructKind::ExplicitH) return seed;
    if (m.eps1().is_zero() && m.eps2().is_zero()) return seed;
    // The preimage q satisfies R(q, p) = 0; solve it with the exact partials.
    return newton_2d(
        [&](Point2 q) { return defining_residual(m, q, p); },
        [&](Point2 q) { return relation_dpoint(m, q, p); }, seed, cfg);
}

// ------------------------------------------------------------------
// differentials and Jacobians
// ------------------------------------------------------------------

Mat2 step_differential(const MapInstance& m, Point2 p, Point2 q) {
    const Mat2 A = relation_dimage(m, p, q);
    const Mat2 B = relation_dpoint(m, p, q);
    const double det = A.det();
    if (!(std::fabs(det) > kDerivativeFloor))
        throw IllConditioned("relation derivative matrix is singular");
    const double inv = 1.0 / det;
    // D = -A^{-1} B
    return {-inv * (A.a22 * B.a11 - A.a12 * B.a21), -inv * (A.a22 * B.a12 - A.a12 * B.a22),
            -inv * (A.a11 * B.a21 - A.a21 * B.a11), -inv * (A.a11 * B.a22 - A.a21 * B.a12)};
}

namespace {

double quotient(double num, double den) {
    if (!(std::fabs(den) > kDerivativeFloor))
        throw DenominatorVanishes("Jacobian denominator vanished");
    return num / den;
}

}  // namespace

double jacobian_analytic(const MapInstance& m, Point2 p, Point2 q) {
    const auto& F = m.F();
    const auto& e1 = m.eps1();
    const auto& e2 = m.eps2();
    const double x = p.x, y = p.y, xb = q.x, yb = q.y;
    switch (m.family()) {
        case Family::ConservativeH:
            return 1.0;
        case Family::CrossFormTildeH: {
            const double Fp = F.deriv(y - e1(yb, x));
            return quotient(1.0 + Fp * e1.dx(x, yb), 1.0 + Fp * e1.dx(yb, x));
        }
        case Family::TildeHm2:
        case Family::TildeH12inv:
            return quotient(cross_form_gx(m, x, yb), cross_form_gx(m, yb, x));
        case Family::T2mu:
            return quotient(1.0 + m.b() * m.mu() * yb, 1.0 + m.b() * m.mu() * x);
        case Family::QRhatH: {
            auto N = [&](double u, double w) {
                return (1.0 + e2.dy(u, w)) * (1.0 + e1.dx(u, w)) - e2.dx(u, w) * e1.dy(u, w);
            };
            return quotient(N(x, y), N(yb, xb));
        }
        case Family::QRexample1:
        case Family::Hp1mu:
            return quotient(1.0 + e1.dx(x, y), 1.0 + e1.dx(yb, xb));
        case Family::QRexample2:
            return quotient(1.0 + e2.dy(x, y), 1.0 + e2.dy(yb, xb));
        case Family::NonorientableHatHm1:
        case Family::Hm1mu:
            return -quotient(1.0 + e1.dx(x, y), 1.0 + e1.dx(yb, xb));
    }
    return 1.0;
}

Mat2 jacobian_fd(const MapInstance& m, Point2 p, const SolverConfig& cfg) {
    require_finite(p);
    const double h = cfg.fd_step;
    const Point2 fx_p = step(m, {p.x + h, p.y}, cfg);
    const Point2 fx_m = step(m, {p.x - h, p.y}, cfg);
    const Point2 fy_p = step(m, {p.x, p.y + h}, cfg);
    const Point2 fy_m = step(m, {p.x, p.y - h}, cfg);
    const double inv = 1.0 / (2.0 * h);
    return {(fx_p.x - fx_m.x) * inv, (fy_p.x - fy_m.x) * inv,
            (fx_p.y - fx_m.y) * inv, (fy_p.y - fy_m.y) * inv};
}

double cross_form_gx(const MapInstance& m, double u, double v) {
    switch (m.family()) {
        case Family::TildeHm2:
        case Family::TildeH12inv:
        case Family::T2mu: return cross_Gu(m, u, v);
        default: throw std::logic_error("cross_form_gx: not a cross-form family");
    }
}

}  // namespace revhenon
