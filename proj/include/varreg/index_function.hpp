#ifndef VARREG_INDEX_FUNCTION_HPP
#define VARREG_INDEX_FUNCTION_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "varreg/errors.hpp"
#include "varreg/numerics.hpp"

namespace varreg {

struct MonomialParams {
    double coefficient; // c > 0
    double exponent;    // e > 0
};

/// A continuous, strictly increasing function eta on [0, domain_max] with
/// eta(0) = 0. Values are immutable and cheap to copy (shared impl).
///
/// The closure operations (inverse, antiderivative, positive linear
/// combinations, compositions) all yield IndexFunction values again.
/// Analytic families carry exact derivatives/inverses/antiderivatives;
/// everything else falls back to bisection and adaptive Simpson quadrature.
class IndexFunction {
public:
    // Default tolerances. Inversion is plain bisection (monotonicity is the
    // only guarantee we have for derived families); quadrature is adaptive
    // Simpson with a hard subdivision cap.
    static constexpr double kInvertTol = 1e-10;
    static constexpr double kQuadAbsTol = 1e-9;
    static constexpr double kQuadRelTol = 1e-10;
    static constexpr int kQuadMaxDepth = 40;

    struct Impl {
        double dmax = kInf;
        std::string label = "index";

        virtual ~Impl() = default;

        /// Value at t; the wrapper guarantees 0 <= t <= dmax.
        virtual double value(double t) const = 0;

        virtual double deriv(double t) const {
            return central_difference([this](double u) { return value(u); }, t, dmax);
        }

        virtual double inv(double s, double tol) const {
            double hi = dmax;
            if (!std::isfinite(hi))
                hi = expand_upper_bracket([this](double t) { return value(t); }, s, 1.0);
            return bisect_increasing([this](double t) { return value(t); }, s, 0.0, hi, tol);
        }

        virtual double integral(double s, double tol) const {
            return adaptive_simpson([this](double t) { return value(t); }, 0.0, s,
                                    tol, kQuadRelTol, kQuadMaxDepth);
        }

        virtual double integral_between(double a, double b, double tol) const {
            return adaptive_simpson([this](double t) { return value(t); }, a, b,
                                    tol, kQuadRelTol, kQuadMaxDepth);
        }

        virtual const MonomialParams* as_monomial() const { return nullptr; }
    };

    explicit IndexFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    // ---- families -------------------------------------------------------

    static IndexFunction monomial(double c, double e, double domain_max = kInf);

    /// eta(t) = C * [log(1/t)]^{-mu} on (0, e^{-mu-1}], eta(0) = 0.
    /// The formula loses monotonicity beyond the cutoff, so the cutoff is
    /// the hard domain end.
    static IndexFunction logarithmic(double mu, double C = 1.0);

    static IndexFunction linear_combination(std::vector<double> weights,
                                            std::vector<IndexFunction> terms);

    static IndexFunction composition(IndexFunction outer, IndexFunction inner);

    /// Wraps an arbitrary monotone callable as an index function. Used for
    /// functions derived inside the library (ratio constructions, rate
    /// functions); optional hooks supply analytic derivative or a cheaper
    /// inversion route.
    static IndexFunction derived(std::string label,
                                 std::function<double(double)> value,
                                 double domain_max,
                                 std::function<double(double)> deriv = nullptr,
                                 std::function<double(double)> invert = nullptr);

    /// Copy that hides all family structure: every evaluation of the result
    /// goes through the generic numeric paths (central differences,
    /// bisection, quadrature). Exists so the numeric machinery can be
    /// validated against the analytic shortcuts.
    static IndexFunction opaque(const IndexFunction& fn);

    // ---- evaluation ------------------------------------------------------

    /// eta(t). Throws DomainExceeded outside [0, domain_max]; eta(0) == 0 exactly.
    double operator()(double t) const {
        check_domain(t);
        if (t == 0.0)
            return 0.0;
        return impl_->value(std::min(t, impl_->dmax));
    }
    double value(double t) const { return (*this)(t); }

    /// eta'(t) for t in [0, domain_max]. Analytic families may throw
    /// NotDifferentiable at t = 0 where the derivative blows up.
    double derivative(double t) const {
        check_domain(t);
        return impl_->deriv(std::min(t, impl_->dmax));
    }

    /// Solves eta(t) = s to |eta(t) - s| <= tol. Analytic inverse where the
    /// family has one, bisection on [0, domain_max] otherwise.
    double invert(double s, double tol = kInvertTol) const {
        if (s < 0.0)
            throw OutOfRange("invert: negative value " + std::to_string(s));
        if (s == 0.0)
            return 0.0;
        const double rmax = range_max();
        if (s > rmax * (1.0 + 1e-9))
            throw OutOfRange("invert: value " + std::to_string(s) +
                             " above range end " + std::to_string(rmax));
        return impl_->inv(std::min(s, rmax), tol);
    }

    /// Antiderivative value Theta(s) = Int_0^s eta(t) dt to absolute
    /// tolerance tol (analytic shortcut where available).
    double integral(double s, double tol = kQuadAbsTol) const {
        check_domain(s);
        if (s == 0.0)
            return 0.0;
        return impl_->integral(std::min(s, impl_->dmax), tol);
    }

    /// Int_a^b eta(t) dt for 0 <= a <= b <= domain_max.
    double integral_between(double a, double b, double tol = kQuadAbsTol) const {
        check_domain(a);
        check_domain(b);
        if (b <= a)
            return 0.0;
        return impl_->integral_between(a, std::min(b, impl_->dmax), tol);
    }

    double domain_max() const { return impl_->dmax; }

    /// eta(domain_max); +inf for unbounded families.
    double range_max() const {
        if (!std::isfinite(impl_->dmax))
            return kInf;
        return impl_->value(impl_->dmax);
    }

    // ---- closure operations ---------------------------------------------

    IndexFunction inverse() const;
    IndexFunction antiderivative() const;

    const MonomialParams* as_monomial() const { return impl_->as_monomial(); }
    const std::string& label() const { return impl_->label; }

private:
    void check_domain(double t) const {
        if (t < 0.0)
            throw DomainExceeded(impl_->label + ": negative argument " + std::to_string(t));
        if (t > impl_->dmax * (1.0 + 1e-12))
            throw DomainExceeded(impl_->label + ": argument " + std::to_string(t) +
                                 " beyond domain end " + std::to_string(impl_->dmax));
    }

    std::shared_ptr<const Impl> impl_;
};

namespace detail {

struct MonomialImpl final : IndexFunction::Impl {
    MonomialParams p;

    MonomialImpl(double c, double e, double dm) : p{c, e} {
        if (!(c > 0.0) || !(e > 0.0))
            throw NotIndexFunction("monomial requires c > 0 and e > 0");
        dmax = dm;
        label = "monomial(c=" + std::to_string(c) + ",e=" + std::to_string(e) + ")";
    }

    double value(double t) const override { return p.coefficient * std::pow(t, p.exponent); }

    double deriv(double t) const override {
        if (t == 0.0) {
            if (p.exponent < 1.0)
                throw NotDifferentiable(label + ": derivative blows up at 0");
            if (p.exponent == 1.0)
                return p.coefficient;
            return 0.0;
        }
        return p.coefficient * p.exponent * std::pow(t, p.exponent - 1.0);
    }

    double inv(double s, double) const override {
        return std::pow(s / p.coefficient, 1.0 / p.exponent);
    }

    double integral(double s, double) const override {
        return p.coefficient * std::pow(s, p.exponent + 1.0) / (p.exponent + 1.0);
    }

    double integral_between(double a, double b, double tol) const override {
        return integral(b, tol) - integral(a, tol);
    }

    const MonomialParams* as_monomial() const override { return &p; }
};

struct LogarithmicImpl final : IndexFunction::Impl {
    double mu;
    double scale;

    LogarithmicImpl(double mu_, double C) : mu(mu_), scale(C) {
        if (!(mu > 0.0) || !(C > 0.0))
            throw NotIndexFunction("logarithmic requires mu > 0 and C > 0");
        dmax = std::exp(-mu - 1.0);
        label = "log(mu=" + std::to_string(mu) + ")";
    }

    double value(double t) const override {
        if (t == 0.0)
            return 0.0;
        return scale * std::pow(std::log(1.0 / t), -mu);
    }

    double deriv(double t) const override {
        if (t == 0.0)
            throw NotDifferentiable(label + ": derivative blows up at 0");
        const double L = std::log(1.0 / t);
        return scale * mu * std::pow(L, -mu - 1.0) / t;
    }
};

struct LinearCombinationImpl final : IndexFunction::Impl {
    std::vector<double> weights;
    std::vector<IndexFunction> terms;

    LinearCombinationImpl(std::vector<double> w, std::vector<IndexFunction> ts)
        : weights(std::move(w)), terms(std::move(ts)) {
        if (weights.empty() || weights.size() != terms.size())
            throw NotIndexFunction("linear combination: weights/terms mismatch");
        double wsum = 0.0;
        dmax = kInf;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] < 0.0)
                throw NotIndexFunction("linear combination: negative weight");
            wsum += weights[i];
            dmax = std::min(dmax, terms[i].domain_max());
        }
        if (wsum <= 0.0)
            throw NotIndexFunction("linear combination: all weights zero");
        label = "lincomb";
    }

    double value(double t) const override {
        double v = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            v += weights[i] * terms[i](t);
        return v;
    }

    double deriv(double t) const override {
        double v = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            v += weights[i] * terms[i].derivative(t);
        return v;
    }

    double integral(double s, double tol) const override {
        double v = 0.0;
        const double tol_i = tol / static_cast<double>(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > 0.0)
                v += weights[i] * terms[i].integral(s, tol_i / std::max(1.0, weights[i]));
        return v;
    }

    double integral_between(double a, double b, double tol) const override {
        double v = 0.0;
        const double tol_i = tol / static_cast<double>(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (weights[i] > 0.0)
                v += weights[i] * terms[i].integral_between(a, b, tol_i / std::max(1.0, weights[i]));
        return v;
    }
};

struct CompositionImpl final : IndexFunction::Impl {
    IndexFunction outer;
    IndexFunction inner;

    CompositionImpl(IndexFunction o, IndexFunction i)
        : outer(std::move(o)), inner(std::move(i)) {
        dmax = inner.domain_max();
        const double odm = outer.domain_max();
        if (std::isfinite(odm) && inner.range_max() > odm)
            dmax = inner.invert(odm, 1e-13);
        label = "compose";
    }

    double value(double t) const override { return outer(inner(t)); }

    double deriv(double t) const override {
        return outer.derivative(inner(t)) * inner.derivative(t);
    }

    double inv(double s, double tol) const override {
        return inner.invert(outer.invert(s, tol), tol);
    }
};

struct NumericInverseImpl final : IndexFunction::Impl {
    IndexFunction base;

    NumericInverseImpl(IndexFunction b, double s_max) : base(std::move(b)) {
        dmax = s_max;
        label = "inverse(" + base.label() + ")";
    }

    double value(double s) const override { return base.invert(s, 1e-13); }

    double deriv(double s) const override {
        const double t = base.invert(s, 1e-13);
        const double d = base.derivative(t);
        if (d <= 0.0)
            throw NotDifferentiable(label + ": flat base derivative");
        return 1.0 / d;
    }

    // Inverting the inverse is just the base function.
    double inv(double t, double) const override { return base(t); }
};

struct NumericAntiderivativeImpl final : IndexFunction::Impl {
    IndexFunction base;

    explicit NumericAntiderivativeImpl(IndexFunction b) : base(std::move(b)) {
        dmax = base.domain_max();
        label = "antiderivative(" + base.label() + ")";
    }

    double value(double s) const override {
        return base.integral(s, IndexFunction::kQuadAbsTol);
    }

    double deriv(double s) const override { return base(s); }

    double integral(double s, double tol) const override {
        return adaptive_simpson([this](double t) { return value(t); }, 0.0, s, tol,
                                IndexFunction::kQuadRelTol, IndexFunction::kQuadMaxDepth);
    }

    // Bisection for Theta(t) = s, carrying prefix integrals along so every
    // step integrates only the bracket delta instead of restarting at 0.
    double inv(double s, double tol) const override {
        double lo = 0.0, integral_lo = 0.0;
        double hi = dmax;
        if (!std::isfinite(hi))
            hi = expand_upper_bracket([this](double t) { return value(t); }, s, 1.0);
        double integral_hi = value(hi);
        const double quad_tol = std::max(1e-14, 0.01 * tol);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            const double integral_mid =
                integral_lo + base.integral_between(lo, mid, quad_tol);
            if (std::abs(integral_mid - s) <= tol &&
                (hi - lo) <= 1e-12 * (1.0 + std::abs(mid)))
                return mid;
            if (integral_mid < s) {
                lo = mid;
                integral_lo = integral_mid;
            } else {
                hi = mid;
                integral_hi = integral_mid;
            }
        }
        (void)integral_hi;
        return 0.5 * (lo + hi);
    }
};

struct DerivedImpl final : IndexFunction::Impl {
    std::function<double(double)> fn;
    std::function<double(double)> dfn;
    std::function<double(double)> ifn;

    DerivedImpl(std::string lbl, std::function<double(double)> v, double dm,
                std::function<double(double)> d, std::function<double(double)> i)
        : fn(std::move(v)), dfn(std::move(d)), ifn(std::move(i)) {
        dmax = dm;
        label = std::move(lbl);
    }

    double value(double t) const override { return fn(t); }

    double deriv(double t) const override {
        if (dfn)
            return dfn(t);
        return Impl::deriv(t);
    }

    double inv(double s, double tol) const override {
        if (ifn)
            return ifn(s);
        return Impl::inv(s, tol);
    }
};

} // namespace detail

inline IndexFunction IndexFunction::monomial(double c, double e, double domain_max) {
    return IndexFunction(std::make_shared<detail::MonomialImpl>(c, e, domain_max));
}

inline IndexFunction IndexFunction::logarithmic(double mu, double C) {
    return IndexFunction(std::make_shared<detail::LogarithmicImpl>(mu, C));
}

inline IndexFunction IndexFunction::linear_combination(std::vector<double> weights,
                                                       std::vector<IndexFunction> terms) {
    return IndexFunction(
        std::make_shared<detail::LinearCombinationImpl>(std::move(weights), std::move(terms)));
}

inline IndexFunction IndexFunction::composition(IndexFunction outer, IndexFunction inner) {
    return IndexFunction(
        std::make_shared<detail::CompositionImpl>(std::move(outer), std::move(inner)));
}

inline IndexFunction IndexFunction::derived(std::string label,
                                            std::function<double(double)> value,
                                            double domain_max,
                                            std::function<double(double)> deriv,
                                            std::function<double(double)> invert) {
    return IndexFunction(std::make_shared<detail::DerivedImpl>(
        std::move(label), std::move(value), domain_max, std::move(deriv), std::move(invert)));
}

inline IndexFunction IndexFunction::opaque(const IndexFunction& fn) {
    return derived("opaque(" + fn.label() + ")", [fn](double t) { return fn(t); },
                   fn.domain_max());
}

inline IndexFunction IndexFunction::inverse() const {
    if (const auto* m = as_monomial()) {
        const double e_inv = 1.0 / m->exponent;
        const double c_inv = std::pow(m->coefficient, -e_inv);
        return monomial(c_inv, e_inv, range_max());
    }
    return IndexFunction(std::make_shared<detail::NumericInverseImpl>(*this, range_max()));
}

inline IndexFunction IndexFunction::antiderivative() const {
    if (const auto* m = as_monomial())
        return monomial(m->coefficient / (m->exponent + 1.0), m->exponent + 1.0, domain_max());
    return IndexFunction(std::make_shared<detail::NumericAntiderivativeImpl>(*this));
}

} // namespace varreg

#endif // VARREG_INDEX_FUNCTION_HPP
