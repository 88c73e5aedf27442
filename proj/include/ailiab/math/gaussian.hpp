#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ailiab {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double inv_sqrt2 = 0.707106781186547524400844362104849039;

// Standard normal density.
inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

// Gaussian Q function: P[Z > x] for Z ~ N(0,1).
inline double gaussian_q(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("gaussian_q: non-finite argument");
    }
    return 0.5 * std::erfc(x * inv_sqrt2);
}

// P[Z <= x].
inline double normal_cdf(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("normal_cdf: non-finite argument");
    }
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

// Inverse of gaussian_q on (0,1), by bracketed bisection. Robust over fast:
// the bracket is widened until it straddles the quantile, then halved to
// near machine precision (~90 Q evaluations).
inline double gaussian_q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("gaussian_q_inv: p must lie in (0,1), got " + std::to_string(p));
    }
    double lo = -1.0;
    double hi = 1.0;
    // Q is strictly decreasing: Q(hi) > p means the root is above hi.
    while (gaussian_q(hi) > p) hi *= 2.0;
    while (gaussian_q(lo) < p) lo *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break; // bracket exhausted at double resolution
        if (gaussian_q(mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace ailiab
