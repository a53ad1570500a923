#ifndef REVHENON_MAP_HPP
#define REVHENON_MAP_HPP

#include <optional>
#include <string>
#include <string_view>

#include "revhenon/geometry.hpp"
#include "revhenon/nonlinearity.hpp"
#include "revhenon/perturbation.hpp"
#include "revhenon/solver.hpp"

namespace revhenon {

/// Catalog of map families. The first eight are the construction templates;
/// the last three are the named one-parameter families used in the
/// bifurcation studies (each is an instance of one of the templates).
enum class Family {
    ConservativeH,        // xb = y, yb = -x + F(y)
    CrossFormTildeH,      // xb = y + e(x,yb) - e(yb,x), yb = -x + F(y - e(yb,x))
    TildeHm2,             // cross form with G(u,v) = -u + F(v) + e(u,v)
    TildeH12inv,          // cross form with G(u,v) = (u - F(v))/b + e(u,v)
    QRhatH,               // two-involution construction with eps1, eps2
    QRexample1,           // QRhatH with eps2 = 0
    QRexample2,           // QRhatH with eps1 = 0
    NonorientableHatHm1,  // xb = -y, yb = -x + F(y) - e(x,y) - e(yb,xb); F even
    T2mu,                 // TildeH12inv with F = M - y^2, e = mu*u*v
    Hm1mu,                // NonorientableHatHm1 with F = y^2 - M, e = mu*u*v
    Hp1mu,                // QRexample1 with F = M - y^2, eps1 = mu*(u*v + u^2)
};

const char* family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

/// An immutable member of the map catalog. Construct through the factories,
/// which validate parameters (b away from zero, even F for the nonorientable
/// family). All evaluation is pure; instances are safe to share across threads.
class MapInstance {
public:
    static MapInstance conservative_h(Nonlinearity F);
    static MapInstance cross_form_tilde_h(Nonlinearity F, PerturbationSpec eps);
    static MapInstance tilde_h_m2(Nonlinearity F, PerturbationSpec eps);
    static MapInstance tilde_h12_inv(Nonlinearity F, double b, PerturbationSpec eps);
    static MapInstance qr_hat_h(Nonlinearity F, PerturbationSpec eps1, PerturbationSpec eps2);
    static MapInstance qr_example1(Nonlinearity F, PerturbationSpec eps1);
    static MapInstance qr_example2(Nonlinearity F, PerturbationSpec eps2);
    static MapInstance nonorientable_hat_h_m1(Nonlinearity F, PerturbationSpec eps);
    static MapInstance t2mu(double M, double b, double mu);
    static MapInstance hm1mu(double M, double mu);
    static MapInstance hp1mu(double M, double mu);

    Family family() const { return family_; }
    const Nonlinearity& F() const { return F_; }
    double b() const { return b_; }
    double mu() const { return mu_; }
    const PerturbationSpec& eps1() const { return eps1_; }
    const PerturbationSpec& eps2() const { return eps2_; }

    /// +1 for orientable families, -1 for the nonorientable ones.
    double orientation() const;

private:
    MapInstance(Family f, Nonlinearity F, double b, double mu, PerturbationSpec e1, PerturbationSpec e2)
        : family_(f), F_(std::move(F)), b_(b), mu_(mu), eps1_(std::move(e1)), eps2_(std::move(e2)) {}

    Family family_;
    Nonlinearity F_;
    double b_;
    double mu_;
    PerturbationSpec eps1_;
    PerturbationSpec eps2_;
};

/// Forward image of p. Families whose defining equations carry the image on
/// both sides are solved by damped Newton seeded at the unperturbed image;
/// QRhatH needs a 2-d solve, every other implicit family reduces to one
/// scalar equation once the explicit component is substituted.
Point2 step(const MapInstance& map, Point2 p, const SolverConfig& cfg = {});

/// Preimage of p, computed from the family's own inverse relations (never by
/// conjugating `step`, so reversibility stays a checkable property).
Point2 step_inverse(const MapInstance& map, Point2 p, const SolverConfig& cfg = {});

/// Residual of the family's defining equations at a (point, image) pair.
Point2 defining_residual(const MapInstance& map, Point2 p, Point2 image);

/// Partial derivative matrices of the defining relation R(p, image) = 0.
Mat2 relation_dimage(const MapInstance& map, Point2 p, Point2 image);  // dR/d(image)
Mat2 relation_dpoint(const MapInstance& map, Point2 p, Point2 image);  // dR/dp

/// Differential of `step` at p from the implicit-function theorem,
/// D = -(dR/d(image))^{-1} (dR/dp). `image` must be step(map, p).
Mat2 step_differential(const MapInstance& map, Point2 p, Point2 image);

/// Determinant of the differential by the family's closed-form quotient.
/// `image` must be step(map, p). Throws DenominatorVanishes when the
/// quotient's denominator degenerates.
double jacobian_analytic(const MapInstance& map, Point2 p, Point2 image);

/// Central-difference differential of `step`; the independent oracle for the
/// closed-form Jacobians.
Mat2 jacobian_fd(const MapInstance& map, Point2 p, const SolverConfig& cfg = {});

/// G_x(u, v) for the cross-form families (TildeHm2, TildeH12inv, T2mu). The
/// analytic Jacobian of these maps is G_x(x, yb) / G_x(yb, x).
double cross_form_gx(const MapInstance& map, double u, double v);

}  // namespace revhenon

#endif
