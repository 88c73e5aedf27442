#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ailiab {

namespace detail {

template <typename F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson quadrature with Richardson correction.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-12, int max_depth = 50) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: abs_tol must be > 0");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Fixed-grid composite Simpson over n_points equally spaced abscissae
// (n_points must be odd and >= 3).
template <typename F>
double composite_simpson(F&& f, double a, double b, int n_points) {
    if (n_points < 3 || n_points % 2 == 0) {
        throw std::invalid_argument("composite_simpson: n_points must be odd and >= 3");
    }
    const double h = (b - a) / static_cast<double>(n_points - 1);
    double sum = f(a) + f(b);
    for (int i = 1; i < n_points - 1; ++i) {
        sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

} // namespace ailiab
