#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ailiab/errors.hpp"

namespace ailiab {

// Shared numeric tolerances for iterative solvers.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_iter = 200;

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("Tolerance: abs_tol must be > 0");
        if (!(rel_tol > 0.0)) throw std::invalid_argument("Tolerance: rel_tol must be > 0");
        if (max_iter < 1) throw std::invalid_argument("Tolerance: max_iter must be >= 1");
    }
};

// Bracketed root finding: bisection with secant acceleration on alternate
// steps, so the bracket is guaranteed to halve at least every other
// iteration. Succeeds when |f(x)| <= abs_tol or the bracket width drops
// below rel_tol * |x|.
template <typename F>
double find_root(F&& f, double lo, double hi, const Tolerance& tol = {}) {
    tol.validate();
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("find_root: invalid bracket [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
    }
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw BracketError("find_root: f(lo) and f(hi) do not change sign");
    }
    for (int it = 0; it < tol.max_iter; ++it) {
        double x = 0.5 * (lo + hi);
        if (it % 2 == 1) {
            // Secant candidate, used only if it lands strictly inside the bracket.
            const double denom = fhi - flo;
            if (denom != 0.0) {
                const double sec = lo - flo * (hi - lo) / denom;
                if (sec > lo && sec < hi) x = sec;
            }
        }
        const double fx = f(x);
        if (std::abs(fx) <= tol.abs_tol || (hi - lo) <= tol.rel_tol * std::abs(x)) {
            return x;
        }
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    throw ConvergenceError("find_root: max_iter exceeded");
}

} // namespace ailiab
