#ifndef REVHENON_PERTURBATION_HPP
#define REVHENON_PERTURBATION_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "revhenon/polynomial.hpp"

namespace revhenon {

/// The perturbing function eps(u, v) with exact partials in both arguments.
/// The "x" partial differentiates with respect to the first argument and
/// the "y" partial with respect to the second, whatever is substituted in.
class PerturbationSpec {
public:
    enum class Form { Zero, BivariatePolynomial, SeparableSum };

    PerturbationSpec() : form_(Form::Zero) {}

    static PerturbationSpec zero() { return PerturbationSpec{}; }

    static PerturbationSpec bivariate(std::vector<BivariateTerm> terms) {
        PerturbationSpec s;
        s.form_ = Form::BivariatePolynomial;
        s.biv_ = BivariatePoly(std::move(terms));
        return s;
    }

    /// eps(u, v) = p(u) + q(v)
    static PerturbationSpec separable(Polynomial p, Polynomial q) {
        PerturbationSpec s;
        s.form_ = Form::SeparableSum;
        s.p_ = std::move(p);
        s.q_ = std::move(q);
        return s;
    }

    double operator()(double u, double v) const {
        switch (form_) {
            case Form::Zero: return 0.0;
            case Form::BivariatePolynomial: return biv_(u, v);
            default: return p_(u) + q_(v);
        }
    }

    double dx(double u, double v) const {
        switch (form_) {
            case Form::Zero: return 0.0;
            case Form::BivariatePolynomial: return biv_.du(u, v);
            default: (void)v; return p_.deriv(u);
        }
    }

    double dy(double u, double v) const {
        switch (form_) {
            case Form::Zero: return 0.0;
            case Form::BivariatePolynomial: return biv_.dv(u, v);
            default: (void)u; return q_.deriv(v);
        }
    }

    Form form() const { return form_; }
    bool is_zero() const { return form_ == Form::Zero; }

    /// First separable component; its derivative is the v(x) of the invariant density.
    const Polynomial& separable_p() const {
        if (form_ != Form::SeparableSum) throw std::logic_error("perturbation is not a separable sum");
        return p_;
    }
    const Polynomial& separable_q() const {
        if (form_ != Form::SeparableSum) throw std::logic_error("perturbation is not a separable sum");
        return q_;
    }
    const BivariatePoly& bivariate_terms() const { return biv_; }

private:
    Form form_;
    BivariatePoly biv_;
    Polynomial p_, q_;
};

}  // namespace revhenon

#endif
