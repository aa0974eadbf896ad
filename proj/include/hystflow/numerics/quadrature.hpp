#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "hystflow/errors.hpp"

namespace hystflow::numerics {

namespace detail {

template<class F>
double simpson_step(F& f, double a, double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth, double& err_acc) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        if (depth <= 0) err_acc += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, err_acc)
           + simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, err_acc);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. Throws QuadratureError when
/// the recursion bottoms out with an error estimate above `tol`.
template<class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double err = 0.0;
    const double result = detail::simpson_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth, err);
    if (err > tol) throw QuadratureError("adaptive Simpson did not converge", err);
    return result;
}

/// Composite trapezoid on [a, b], doubling the panel count until the
/// Richardson estimate |T_2n - T_n| / 3 drops below `tol`. Returns the
/// extrapolated value.
template<class F>
double trapezoid_richardson(F&& f, double a, double b, double tol, int max_levels = 22) {
    if (a == b) return 0.0;
    std::size_t n = 1;
    double h = b - a;
    double t = 0.5 * h * (f(a) + f(b));
    double err = 0.0;
    for (int level = 0; level < max_levels; ++level) {
        double mid = 0.0;
        for (std::size_t i = 0; i < n; ++i) mid += f(a + (static_cast<double>(i) + 0.5) * h);
        const double t2 = 0.5 * t + 0.5 * h * mid;
        err = std::abs(t2 - t) / 3.0;
        n *= 2;
        h *= 0.5;
        if (level >= 2 && err <= tol) return t2 + (t2 - t) / 3.0;
        t = t2;
    }
    throw QuadratureError("composite trapezoid did not converge", err);
}

/// 8-point Gauss-Legendre on [a, b]; for smooth integrands on short panels.
template<class F>
double gauss_legendre8(F&& f, double a, double b) {
    static constexpr std::array<double, 4> x{0.1834346424956498, 0.5255324099163290,
                                             0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> w{0.3626837833783620, 0.3137066458778873,
                                             0.2223810344533745, 0.1012285362903763};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return h * s;
}

/// Adaptive bisection driven by 8-point Gauss-Legendre; intended for
/// analytic integrands where GL8 on a handful of panels is already exact.
template<class F>
double adaptive_gauss(F&& f, double a, double b, double abs_tol, int depth = 30) {
    const double whole = gauss_legendre8(f, a, b);
    const double m = 0.5 * (a + b);
    const double halves = gauss_legendre8(f, a, m) + gauss_legendre8(f, m, b);
    if (depth <= 0 || std::abs(halves - whole) <= abs_tol) return halves;
    return adaptive_gauss(f, a, m, 0.5 * abs_tol, depth - 1)
           + adaptive_gauss(f, m, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace hystflow::numerics
