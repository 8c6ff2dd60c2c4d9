#ifndef VARREG_NUMERICS_HPP
#define VARREG_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "varreg/errors.hpp"

namespace varreg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

template <class F>
double simpson_panel(F&& f, double a, double fa, double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left  = simpson_panel(f, a, fa, m, fm, lm, flm);
    const double right = simpson_panel(f, m, fm, b, fb, rm, frm);
    const double refined = left + right;
    const double err = (refined - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol)
        return refined + err;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
///
/// The refinement target is max(abs_tol, rel_tol * |first estimate|) so tiny
/// integrals still come out with relative accuracy. Recursion is capped at
/// max_depth; at the cap the current refined panel is accepted as is.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-9,
                        double rel_tol = 1e-10, int max_depth = 40) {
    if (!(b > a))
        return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = detail::simpson_panel(f, a, fa, b, fb, m, fm);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Solve f(t) = target for strictly increasing f by bisection on [lo, hi].
/// Requires f(lo) <= target <= f(hi).
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi,
                         double value_tol, int max_iter = 200) {
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < max_iter; ++i) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break; // bracket exhausted at double precision
        const double v = f(mid);
        const double err = v - target;
        if (std::abs(err) <= value_tol && (hi - lo) <= 1e-12 * (1.0 + std::abs(mid)))
            return mid;
        if (err < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Expand an upper bracket end for increasing f until f(hi) >= target.
template <class F>
double expand_upper_bracket(F&& f, double target, double start, int max_doublings = 200) {
    double hi = start > 0.0 ? start : 1.0;
    for (int i = 0; i < max_doublings; ++i) {
        if (f(hi) >= target)
            return hi;
        hi *= 2.0;
        if (!std::isfinite(hi))
            break;
    }
    throw BracketFailure("bracket expansion failed to straddle target");
}

/// Central difference derivative with step control; falls back to a one-sided
/// quotient at the ends of the admissible interval [0, dmax].
template <class F>
double central_difference(F&& f, double t, double dmax,
                          double rel_step = 1e-6) {
    double h = rel_step * std::max(std::abs(t), 1e-3);
    if (t - h < 0.0)
        h = 0.5 * t;
    if (h <= 0.0) { // t == 0: one-sided quotient through the origin
        h = rel_step * 1e-3;
        if (h > dmax)
            h = 0.5 * dmax;
        return (f(h) - f(0.0)) / h;
    }
    if (t + h > dmax) {
        const double hb = std::min(h, t - 0.0);
        return (f(t) - f(t - hb)) / hb;
    }
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares straight line through (x_i, y_i).
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw InsufficientData("fit_line needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300)
        throw InsufficientData("fit_line: degenerate abscissae");
    LineFit out;
    out.slope = (n * sxy - sx * sy) / det;
    out.intercept = (sy - out.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (out.slope * x[i] + out.intercept);
        ss += r * r;
    }
    out.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return out;
}

} // namespace varreg

#endif // VARREG_NUMERICS_HPP
