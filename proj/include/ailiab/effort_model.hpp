#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ailiab {

// A scalar function together with its first derivative. Effort solvers only
// see this interface, so alternative cost/sample families can be plugged in
// without touching them.
struct ScalarFamily {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
};

// Effort economics of the insured developer: c(a) is the cost of effort and
// h(a) the training-sample count it buys. The default family is quadratic
// cost c(a) = c0*a^2 (c(0)=0, strictly convex increasing) with a linear
// sample map h(a) = h0*a (h(0)=0, so the no-effort error rate is Q(0)=0.5).
struct EffortModel {
    ScalarFamily cost;
    ScalarFamily samples;
    double c0 = 0.0; // quadratic cost coefficient, kept for provenance echo
    double h0 = 0.0; // linear sample coefficient

    static EffortModel quadratic_linear(double c0, double h0) {
        if (!(c0 > 0.0) || !std::isfinite(c0)) {
            throw std::invalid_argument("EffortModel: c0 must be finite and > 0");
        }
        if (!(h0 > 0.0) || !std::isfinite(h0)) {
            throw std::invalid_argument("EffortModel: h0 must be finite and > 0");
        }
        EffortModel em;
        em.c0 = c0;
        em.h0 = h0;
        em.cost = {[c0](double a) { return c0 * a * a; },
                   [c0](double a) { return 2.0 * c0 * a; }};
        em.samples = {[h0](double a) { return h0 * a; },
                      [h0](double) { return h0; }};
        return em;
    }
};

} // namespace ailiab
