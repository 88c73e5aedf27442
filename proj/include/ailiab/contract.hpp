#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "ailiab/math/monte_carlo.hpp"
#include "ailiab/math/random.hpp"
#include "ailiab/risk.hpp"

namespace ailiab {

// An insurance participant: initial wealth plus the exponential-utility
// risk preference (epsilon > 0 averse, 0 neutral, < 0 seeking).
struct Participant {
    double wealth;
    double epsilon;

    Participant(double wealth_, double epsilon_) : wealth(wealth_), epsilon(epsilon_) {
        if (!(wealth >= 0.0)) throw std::invalid_argument("Participant: wealth must be >= 0");
        if (!std::isfinite(epsilon)) {
            throw std::invalid_argument("Participant: epsilon must be finite");
        }
    }
};

// Linear contract: premium paid up front, coverage as the reimbursed
// fraction of realized loss.
struct Contract {
    double premium;
    double coverage;

    Contract(double premium_, double coverage_) : premium(premium_), coverage(coverage_) {
        if (!(premium >= 0.0)) throw std::invalid_argument("Contract: premium must be >= 0");
        if (!(coverage >= 0.0 && coverage <= 1.0)) {
            throw std::invalid_argument("Contract: coverage must lie in [0,1]");
        }
    }
};

// Feasible premium range: insurer break-even from below, the risk-averse
// agent's certainty-equivalent willingness to pay from above. upper is
// +infinity when the MGF diverges at epsilon*rho.
struct PremiumInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool nonempty = false;
};

// Exponential utility u(x) = 1 - e^{-epsilon x}, identity when epsilon = 0.
inline double utility(const Participant& p, double x) {
    if (!std::isfinite(x)) throw std::domain_error("utility: non-finite wealth argument");
    if (p.epsilon == 0.0) return x;
    const double e = -p.epsilon * x;
    if (e > 700.0) {
        throw std::overflow_error("utility: exp(" + std::to_string(e) +
                                  ") overflows; -epsilon*x too large");
    }
    return 1.0 - std::exp(e);
}

// Insurer break-even premium rho * E[x] at the given operating point and
// uncertainty level.
inline double fair_premium(const RiskScenario& s, const OperatingPoint& op, double sigma_sq,
                           double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("fair_premium: rho must lie in (0,1]");
    }
    return rho * expected_loss(s, op, sigma_sq);
}

// Premium interval of the full-information contract:
//   rho E[x]  <=  pi  <=  (1/epsilon) log E[e^{epsilon rho x}].
// Requires a risk-averse agent (epsilon > 0) and rho in (0,1]. A diverging
// MGF is reported as upper = +infinity (the bound is vacuous, not empty).
inline PremiumInterval premium_interval(const RiskScenario& s, const OperatingPoint& op,
                                        double sigma_sq, double rho, double epsilon) {
    if (rho == 0.0) {
        throw std::invalid_argument("premium_interval: degenerate contract, rho must be > 0");
    }
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("premium_interval: rho must lie in (0,1]");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument(
            "premium_interval: unsupported risk preference, epsilon must be > 0");
    }
    PremiumInterval out;
    out.lower = rho * expected_loss(s, op, sigma_sq);
    try {
        out.upper = log_loss_mgf(s, op, sigma_sq, epsilon * rho) / epsilon;
    } catch (const MgfDivergenceError&) {
        out.upper = std::numeric_limits<double>::infinity();
    }
    out.nonempty = out.lower <= out.upper;
    return out;
}

struct IrCheck {
    bool participates = false;
    double mean_difference = 0.0; // E[U insured] - E[U uninsured]
    double std_error = 0.0;       // standard error of the paired difference
};

// Individual-rationality check by Monte Carlo: the agent joins when the
// insured expected utility is no worse than the uninsured baseline within
// sampling tolerance. Each draw feeds both sides (paired comparison), and
// the verdict is mean(diff) >= -4 * SE(diff).
inline IrCheck verify_participation(const RiskScenario& s, const OperatingPoint& op,
                                    double sigma_sq, const Contract& contract,
                                    const Participant& agent, double effort_cost,
                                    std::int64_t mc_n, RandomStream& stream) {
    if (mc_n < 10000) {
        throw std::domain_error("verify_participation: mc_n must be >= 10^4");
    }
    if (!(effort_cost >= 0.0)) {
        throw std::domain_error("verify_participation: effort_cost must be >= 0");
    }
    const double base_wealth = agent.wealth - effort_cost;
    auto diff_sampler = [&](RandomStream& rs) {
        const double x = sample_total_loss(s, op, sigma_sq, rs);
        const double u_insured =
            utility(agent, base_wealth - contract.premium - (1.0 - contract.coverage) * x);
        const double u_uninsured = utility(agent, base_wealth - x);
        return u_insured - u_uninsured;
    };
    const McEstimate est = expectation_mc(diff_sampler, mc_n, stream);
    IrCheck out;
    out.mean_difference = est.mean;
    out.std_error = est.std_error;
    out.participates = est.mean >= -4.0 * est.std_error;
    return out;
}

} // namespace ailiab
