#ifndef REVHENON_POLYNOMIAL_HPP
#define REVHENON_POLYNOMIAL_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace revhenon {

/// Univariate polynomial, coefficients in ascending degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    double operator()(double t) const {
        double r = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;) r = r * t + c_[k];
        return r;
    }

    double deriv(double t) const {
        double r = 0.0;
        for (std::size_t k = c_.size(); k-- > 1;) r = r * t + static_cast<double>(k) * c_[k];
        return r;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial{};
        std::vector<double> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
        return Polynomial(std::move(d));
    }

    bool is_zero() const { return c_.empty(); }
    const std::vector<double>& coeffs() const { return c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }
    std::vector<double> c_;
};

/// One monomial a * u^i * v^j of a bivariate polynomial.
struct BivariateTerm {
    int i = 0;
    int j = 0;
    double a = 0.0;
};

/// Sparse bivariate polynomial with exact partial derivatives.
class BivariatePoly {
public:
    BivariatePoly() = default;
    explicit BivariatePoly(std::vector<BivariateTerm> terms) : terms_(std::move(terms)) {}

    double operator()(double u, double v) const {
        double r = 0.0;
        for (const auto& t : terms_) r += t.a * ipow(u, t.i) * ipow(v, t.j);
        return r;
    }

    double du(double u, double v) const {
        double r = 0.0;
        for (const auto& t : terms_)
            if (t.i > 0) r += t.a * t.i * ipow(u, t.i - 1) * ipow(v, t.j);
        return r;
    }

    double dv(double u, double v) const {
        double r = 0.0;
        for (const auto& t : terms_)
            if (t.j > 0) r += t.a * t.j * ipow(u, t.i) * ipow(v, t.j - 1);
        return r;
    }

    bool empty() const { return terms_.empty(); }
    const std::vector<BivariateTerm>& terms() const { return terms_; }

private:
    static double ipow(double t, int n) {
        double r = 1.0;
        for (int k = 0; k < n; ++k) r *= t;
        return r;
    }
    std::vector<BivariateTerm> terms_;
};

}  // namespace revhenon

#endif
