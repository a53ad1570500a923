#ifndef REVHENON_NONLINEARITY_HPP
#define REVHENON_NONLINEARITY_HPP

#include <cmath>
#include <stdexcept>
#include <utility>

#include "revhenon/polynomial.hpp"

namespace revhenon {

/// The nonlinear function F(y) of the Henon-like maps, with exact derivative.
class Nonlinearity {
public:
    enum class Kind { QuadraticMinus, QuadraticPlus, GenericPolynomial };

    /// F(y) = M - y^2
    static Nonlinearity quadratic_minus(double M) { return Nonlinearity(Kind::QuadraticMinus, M, {}); }
    /// F(y) = -M + y^2
    static Nonlinearity quadratic_plus(double M) { return Nonlinearity(Kind::QuadraticPlus, M, {}); }
    /// F given by an explicit coefficient list.
    static Nonlinearity polynomial(std::vector<double> coeffs) {
        return Nonlinearity(Kind::GenericPolynomial, 0.0, Polynomial(std::move(coeffs)));
    }

    double operator()(double y) const {
        switch (kind_) {
            case Kind::QuadraticMinus: return M_ - y * y;
            case Kind::QuadraticPlus: return -M_ + y * y;
            default: return poly_(y);
        }
    }

    double deriv(double y) const {
        switch (kind_) {
            case Kind::QuadraticMinus: return -2.0 * y;
            case Kind::QuadraticPlus: return 2.0 * y;
            default: return poly_.deriv(y);
        }
    }

    Kind kind() const { return kind_; }
    double M() const { return M_; }
    const Polynomial& poly() const { return poly_; }

    /// Sampled evenness check, 32 points on |y| <= 4.
    bool is_even(double tol = 1e-9) const {
        for (int k = 1; k <= 32; ++k) {
            const double y = 4.0 * k / 32.0;
            const double fy = (*this)(y), fmy = (*this)(-y);
            if (std::fabs(fy - fmy) > tol * std::max(1.0, std::fabs(fy))) return false;
        }
        return true;
    }

private:
    Nonlinearity(Kind k, double M, Polynomial p) : kind_(k), M_(M), poly_(std::move(p)) {}
    Kind kind_;
    double M_;
    Polynomial poly_;
};

}  // namespace revhenon

#endif
