#ifndef VARREG_CALCULUS_HPP
#define VARREG_CALCULUS_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "varreg/errors.hpp"
#include "varreg/index_function.hpp"
#include "varreg/numerics.hpp"

namespace varreg {

/// psi (strictly convex misfit), phi (concave rate), and the derived trio
///   f = [psi' / phi'] o phi^{-1},   H = Int_0^s f,   G = Int_0^s f^{-1}.
/// On the common domain these satisfy psi = H o phi, H = G o f and
/// G^{-1} o psi = f o phi.
struct CalculusTriple {
    IndexFunction psi;
    IndexFunction phi;
    IndexFunction f;
    IndexFunction H;
    IndexFunction G;
    double common_domain_end = 1.0; // validated upper end for psi/phi arguments
};

struct CalculusOptions {
    int validation_samples = 64;
    bool force_numeric = false; // hide family structure; generic numerics only
    double sample_upper = 0.0;  // 0 = min of the two domain ends (capped at 1)
};

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(llo + (lhi - llo) * i / (n - 1.0)));
    out.back() = hi;
    return out;
}

} // namespace detail

/// Builds the calculus triple, validating Assumption-style hypotheses by
/// sampled second differences (64 log-spaced points by default; a sampled,
/// not certified, check). A psi that fails strict convexity is still
/// accepted when the derived f passes its strict monotonicity samples;
/// that covers monomial pairs with 0 < kappa < p <= 1.
inline CalculusTriple build_calculus(const IndexFunction& psi_in, const IndexFunction& phi_in,
                                     const CalculusOptions& opt = {}) {
    const IndexFunction psi = opt.force_numeric ? IndexFunction::opaque(psi_in) : psi_in;
    const IndexFunction phi = opt.force_numeric ? IndexFunction::opaque(phi_in) : phi_in;

    double t_hi = opt.sample_upper;
    if (t_hi <= 0.0) {
        t_hi = std::min(psi.domain_max(), phi.domain_max());
        if (!std::isfinite(t_hi))
            t_hi = 1.0;
    }

    const int n = std::max(8, opt.validation_samples);
    const auto ts = detail::log_spaced(t_hi * 1e-6, t_hi, n);

    bool psi_strictly_convex = true;
    for (double t : ts) {
        const double h = 0.25 * t;
        if (t + h > t_hi || t - h <= 0.0)
            continue;
        const double pm = psi(t - h), p0 = psi(t), pp = psi(t + h);
        const double mag = std::abs(pm) + std::abs(pp) + 2.0 * std::abs(p0);
        const double floor_eps = 32.0 * 2.2e-16 * std::max(1e-300, mag);
        if (pp - 2.0 * p0 + pm <= floor_eps)
            psi_strictly_convex = false;

        const double qm = phi(t - h), q0 = phi(t), qp = phi(t + h);
        const double qmag = std::abs(qm) + std::abs(qp) + 2.0 * std::abs(q0);
        if (qp - 2.0 * q0 + qm > 32.0 * 2.2e-16 * std::max(1e-300, qmag))
            throw NotConcave("phi fails sampled concavity at t=" + std::to_string(t));

        const double dphi = phi.derivative(t);
        if (!(dphi > 0.0))
            throw DegenerateDerivative("phi' <= 0 at t=" + std::to_string(t));
    }

    // f(s) = psi'(u) / phi'(u) at u = phi^{-1}(s); f(0) = 0.
    IndexFunction f = [&]() {
        const auto* mp = psi.as_monomial();
        const auto* mk = phi.as_monomial();
        if (mp && mk && !opt.force_numeric) {
            const double p = mp->exponent, cp = mp->coefficient;
            const double k = mk->exponent, ck = mk->coefficient;
            const double e0 = (p - k) / k;
            if (e0 <= 0.0)
                throw NotIndexFunction("f degenerates: psi exponent must exceed phi exponent");
            const double c0 = (cp * p / (ck * k)) * std::pow(ck, -e0);
            const double shared_end = std::min(psi.domain_max(), phi.domain_max());
            const double f_dmax = std::isfinite(shared_end) ? phi(shared_end) : kInf;
            return IndexFunction::monomial(c0, e0, f_dmax);
        }
        const double f_dmax = phi(t_hi);
        auto ratio = [psi, phi](double u) {
            return psi.derivative(u) / phi.derivative(u);
        };
        auto value = [psi, phi, ratio](double s) {
            if (s == 0.0)
                return 0.0;
            const double u = phi.invert(s, 1e-13);
            return ratio(u);
        };
        // f is the ratio pushed through phi, so inverting f only needs one
        // bisection on the ratio itself (the ratio is strictly increasing
        // under the validated hypotheses).
        auto inv = [psi, phi, ratio, t_hi](double tau) {
            const double u = bisect_increasing(ratio, tau, 0.0, t_hi, 1e-13);
            return phi(u);
        };
        return IndexFunction::derived("f(" + psi.label() + "," + phi.label() + ")",
                                      value, f_dmax, nullptr, inv);
    }();

    // f must be an index function: f(0) = 0 and strictly increasing.
    {
        if (f(0.0) != 0.0)
            throw NotIndexFunction("derived f has f(0) != 0");
        const double f_hi = f.domain_max();
        const auto ss = detail::log_spaced(f_hi * 1e-6, f_hi, n);
        double prev = 0.0;
        bool increasing = true;
        for (double s : ss) {
            const double v = f(s);
            if (!(v > prev)) {
                increasing = false;
                break;
            }
            prev = v;
        }
        if (!increasing) {
            if (!psi_strictly_convex)
                throw NotConvex("psi fails sampled strict convexity and f is not increasing");
            throw NotIndexFunction("derived f fails sampled strict monotonicity");
        }
    }

    CalculusTriple triple{psi_in, phi_in, f, f.antiderivative(), f.inverse().antiderivative(),
                          t_hi};
    return triple;
}

/// Generalized Young gap  Int_0^a f + Int_0^b f^{-1} - a*b  for an index
/// function f. Nonnegative for all admissible (a, b); zero on b = f(a).
inline double young_gap(const IndexFunction& f, double a, double b, double tol = 1e-10) {
    if (a < 0.0 || b < 0.0)
        throw OutOfRange("young_gap: negative argument");
    const IndexFunction finv = f.inverse();
    return f.integral(a, tol) + finv.integral(b, tol) - a * b;
}

struct QuasiAdditivity {
    double a = 1.0;
    double b = 1.0;
};

/// Constants with psi(u+v) <= a psi(u) + b psi(v). Exact for monomials
/// (2^{p-1} for p >= 1, 1 for p < 1); other families get a grid search
/// validated on sampled pairs. nullopt means unverified.
inline std::optional<QuasiAdditivity> quasi_additivity_constants(const IndexFunction& psi) {
    if (const auto* m = psi.as_monomial()) {
        const double p = m->exponent;
        const double c = p >= 1.0 ? std::pow(2.0, p - 1.0) : 1.0;
        return QuasiAdditivity{c, c};
    }
    double dmax = psi.domain_max();
    if (!std::isfinite(dmax))
        dmax = 1.0;
    const auto us = detail::log_spaced(dmax * 1e-6, 0.5 * dmax, 24);
    static constexpr double candidates[] = {1.0, 1.25, 1.5, 2.0,  3.0,  4.0,  6.0, 8.0,
                                            12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 128.0};
    for (double a : candidates) {
        bool ok = true;
        for (double u : us) {
            for (double v : us) {
                if (u + v > dmax)
                    continue;
                if (psi(u + v) > a * (psi(u) + psi(v)) * (1.0 + 1e-12)) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                break;
        }
        if (ok)
            return QuasiAdditivity{a, a};
    }
    return std::nullopt;
}

struct InterplayReport {
    double max_err_psi_vs_H_phi = 0.0;   // |psi(s) - H(phi(s))|
    double max_err_Ginv_psi_vs_f_phi = 0.0; // |G^{-1}(psi(s)) - f(phi(s))|
    double max_err_H_vs_G_f = 0.0;       // |H(t) - G(f(t))|
};

/// Samples the interplay identities over the validated common domain.
inline InterplayReport verify_interplay(const CalculusTriple& tr, int samples = 50) {
    InterplayReport rep;
    const auto ss = detail::log_spaced(tr.common_domain_end * 1e-4,
                                       tr.common_domain_end * (1.0 - 1e-4), samples);
    const IndexFunction Ginv = tr.G.inverse();
    for (double s : ss) {
        const double lhs1 = tr.psi(s);
        const double rhs1 = tr.H(tr.phi(s));
        rep.max_err_psi_vs_H_phi = std::max(rep.max_err_psi_vs_H_phi, std::abs(lhs1 - rhs1));

        const double lhs2 = Ginv(tr.psi(s));
        const double rhs2 = tr.f(tr.phi(s));
        rep.max_err_Ginv_psi_vs_f_phi =
            std::max(rep.max_err_Ginv_psi_vs_f_phi, std::abs(lhs2 - rhs2));

        const double t = tr.phi(s);
        const double lhs3 = tr.H(t);
        const double rhs3 = tr.G(tr.f(t));
        rep.max_err_H_vs_G_f = std::max(rep.max_err_H_vs_G_f, std::abs(lhs3 - rhs3));
    }
    return rep;
}

} // namespace varreg

#endif // VARREG_CALCULUS_HPP
