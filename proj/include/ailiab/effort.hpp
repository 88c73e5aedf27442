#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "ailiab/contract.hpp"
#include "ailiab/effort_model.hpp"
#include "ailiab/errors.hpp"
#include "ailiab/math/gaussian.hpp"
#include "ailiab/math/root_find.hpp"
#include "ailiab/risk.hpp"
#include "ailiab/roc.hpp"

namespace ailiab {

// Symmetric error probability at effort a: p(a) = Q(d_const * h(a)).
// p(0) = Q(0) = 0.5 and p decreases to 0 as a grows.
inline double error_prob(const EffortModel& em, const RocModel& roc, double a) {
    if (!(a >= 0.0)) throw std::domain_error("error_prob: effort must be >= 0");
    return gaussian_q(roc.d_const * em.samples.value(a));
}

// d/da Q(d_const * h(a)) = -phi(d_const * h(a)) * d_const * h'(a).
inline double error_prob_deriv(const EffortModel& em, const RocModel& roc, double a) {
    if (!(a >= 0.0)) throw std::domain_error("error_prob_deriv: effort must be >= 0");
    return -normal_pdf(roc.d_const * em.samples.value(a)) * roc.d_const * em.samples.deriv(a);
}

// Retained exposure scale of the agent under coverage rho:
// L_bar = (1 - rho) * D_AI * (l_FP + l_FN).
inline double retained_exposure(const RiskScenario& s, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("retained_exposure: rho must lie in [0,1]");
    }
    return (1.0 - rho) * population_size(s.population) *
           (loss_false_positive(s.damages) + loss_false_negative(s.damages));
}

// Risk-neutral agent's expected burden f_V(a) = c(a) + p(a) * lbar.
inline double hidden_action_objective(const EffortModel& em, const RocModel& roc, double lbar,
                                      double a) {
    if (!(a >= 0.0)) throw std::domain_error("hidden_action_objective: effort must be >= 0");
    if (!(lbar >= 0.0)) throw std::domain_error("hidden_action_objective: lbar must be >= 0");
    return em.cost.value(a) + error_prob(em, roc, a) * lbar;
}

struct EffortSolution {
    double a_opt = 0.0;
    double objective_value = 0.0;
    bool interior = false;
};

// Minimizes c(a) + p(a)*lbar over a >= 0 for pluggable (cost, error-prob)
// families, by bracketed root finding on the first-order condition
// c'(a) + p'(a)*lbar = 0. The stationary point counts as interior only when
// the existence condition c(a) < (1 - p(a))*lbar also holds; otherwise the
// optimum is a = 0.
inline EffortSolution solve_effort(const ScalarFamily& cost, const ScalarFamily& prob, double lbar,
                                   const Tolerance& tol = {}) {
    tol.validate();
    if (!(lbar >= 0.0)) throw std::domain_error("solve_effort: lbar must be >= 0");
    auto objective = [&](double a) { return cost.value(a) + prob.value(a) * lbar; };
    auto slope = [&](double a) { return cost.deriv(a) + prob.deriv(a) * lbar; };
    EffortSolution boundary{0.0, objective(0.0), false};
    if (lbar == 0.0 || slope(0.0) >= 0.0) {
        return boundary;
    }
    double hi = 1.0;
    int expand = 0;
    while (slope(hi) <= 0.0) {
        hi *= 2.0;
        if (++expand > 200) {
            throw ConvergenceError("solve_effort: no finite stationary point found");
        }
    }
    const double a_star = find_root(slope, 0.0, hi, tol);
    if (!(cost.value(a_star) < (1.0 - prob.value(a_star)) * lbar)) {
        return boundary;
    }
    return {a_star, objective(a_star), true};
}

// Hidden-action optimum for the Q(d_const * h(a)) error model.
inline EffortSolution solve_optimal_effort(const EffortModel& em, const RocModel& roc, double lbar,
                                           const Tolerance& tol = {}) {
    ScalarFamily prob{
        [&em, &roc](double a) { return error_prob(em, roc, a); },
        [&em, &roc](double a) { return error_prob_deriv(em, roc, a); },
    };
    return solve_effort(em.cost, prob, lbar, tol);
}

struct TwoActionChoice {
    double a_low = 0.0;
    double a_high = 0.0;
    bool condition_satisfied = false;
    enum class Action { high, low } chosen = Action::low;
    double probability_gain = 0.0; // p(a_low) - p(a_high), LHS of the condition
    double cost_ratio = 0.0;       // (c(a_high) - c(a_low)) / lbar, RHS
};

// Two-action moral-hazard test: the agent picks the high effort exactly when
// the error-probability reduction outweighs the cost increase per unit of
// retained exposure, p(a_L) - p(a_H) >= (c(a_H) - c(a_L)) / lbar.
inline TwoActionChoice moral_hazard_check(const EffortModel& em, const RocModel& roc, double lbar,
                                          double a_low, double a_high) {
    if (!(a_high > a_low && a_low >= 0.0)) {
        throw std::invalid_argument("moral_hazard_check: need a_high > a_low >= 0");
    }
    if (lbar == 0.0) {
        throw std::domain_error("moral_hazard_check: condition undefined for lbar = 0");
    }
    if (!(lbar > 0.0)) throw std::domain_error("moral_hazard_check: lbar must be > 0");
    TwoActionChoice out;
    out.a_low = a_low;
    out.a_high = a_high;
    out.probability_gain = error_prob(em, roc, a_low) - error_prob(em, roc, a_high);
    out.cost_ratio = (em.cost.value(a_high) - em.cost.value(a_low)) / lbar;
    out.condition_satisfied = out.probability_gain >= out.cost_ratio;
    out.chosen = out.condition_satisfied ? TwoActionChoice::Action::high
                                         : TwoActionChoice::Action::low;
    return out;
}

// First-best effort: the grid element maximizing the insurer's expected
// value pi - rho * E[x(a)], with errors at the fair threshold of the effort-
// dependent ROC and the scenario's initial uncertainty variance. Initial
// wealth and the uncertainty surcharge are constant in a, so they cannot
// affect the argmax. Ties break toward larger effort.
inline double first_best_effort(const RiskScenario& s, const Contract& contract,
                                std::span<const double> candidates) {
    if (candidates.empty()) {
        throw std::domain_error("first_best_effort: candidate grid must be nonempty");
    }
    double best_a = 0.0;
    double best_value = 0.0;
    bool have = false;
    for (const double a : candidates) {
        if (!(a >= 0.0)) throw std::domain_error("first_best_effort: efforts must be >= 0");
        const OperatingPoint op = fair_threshold_errors(s.roc, s.effort_model.samples.value(a));
        const double value =
            contract.premium - contract.coverage * expected_loss(s, op, s.uncertainty.sigma0_sq);
        if (!have || value > best_value || (value == best_value && a > best_a)) {
            best_a = a;
            best_value = value;
            have = true;
        }
    }
    return best_a;
}

} // namespace ailiab
