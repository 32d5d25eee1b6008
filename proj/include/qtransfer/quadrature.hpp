#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include "qtransfer/errors.hpp"

namespace qtransfer {

namespace detail {

inline double quad_norm(double x) { return std::fabs(x); }
inline double quad_norm(const std::complex<double>& z) { return std::abs(z); }

template <class F, class T>
T simpson_adapt(F& f, double a, double fa_t, double b, T fa, T fm, T fb, T whole,
                double abs_tol, int depth) {
    (void)fa_t;
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T delta = left + right - whole;
    // machine floor: once the correction is at rounding level, refining
    // further cannot help
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                         (quad_norm(left) + quad_norm(right));
    if (quad_norm(delta) <= 15.0 * abs_tol || quad_norm(delta) <= floor)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw QuadratureError("adaptive Simpson: max depth reached without convergence");
    return simpson_adapt(f, a, 0.0, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           simpson_adapt(f, m, 0.0, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with an absolute tolerance. The interval is
// pre-split into uniform panels so narrow features interior to [a, b] are
// seen before adaptation starts. Works for real and complex integrands.
template <class T = double, class F>
T integrate_adaptive(F&& f, double a, double b, double abs_tol, int initial_panels = 32,
                     int max_depth = 48) {
    if (a == b) return T{};
    if (initial_panels < 1) initial_panels = 1;
    T total{};
    const double h = (b - a) / initial_panels;
    const double panel_tol = abs_tol / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == initial_panels) ? b : a + (i + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const T f0 = f(x0);
        const T fm = f(xm);
        const T f1 = f(x1);
        const T whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += detail::simpson_adapt(f, x0, 0.0, x1, f0, fm, f1, whole, panel_tol, max_depth);
    }
    return total;
}

} // namespace qtransfer
