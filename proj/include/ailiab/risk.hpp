#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ailiab/effort_model.hpp"
#include "ailiab/errors.hpp"
#include "ailiab/math/random.hpp"
#include "ailiab/roc.hpp"

namespace ailiab {

// Deployed-population scaling: one machine diagnoses k times faster than a
// doctor who sees d_doc patients per period, and n machines are deployed.
struct PopulationModel {
    double k;
    double n;
    double d_doc;

    PopulationModel(double k_, double n_, double d_doc_) : k(k_), n(n_), d_doc(d_doc_) {
        if (!(k > 0.0)) throw std::invalid_argument("PopulationModel: k must be > 0");
        if (!(n >= 1.0)) throw std::invalid_argument("PopulationModel: n must be >= 1");
        if (!(d_doc >= 0.0)) throw std::invalid_argument("PopulationModel: d_doc must be >= 0");
    }
};

// Exposed population size k*n*d_doc, as an exact real.
inline double population_size(const PopulationModel& p) {
    return p.k * p.n * p.d_doc;
}

// Same quantity rounded to the nearest whole count.
inline long long population_count(const PopulationModel& p) {
    return std::llround(population_size(p));
}

// Per-patient damages of the two misclassification outcomes. A false
// positive costs quarantine productivity; a false negative costs delayed
// treatment, sick-leave productivity, and onward spreading scaled by r0.
struct DamageModel {
    double alpha;        // work-from-home productivity loss ratio, (0,1]
    double beta;         // infection productivity loss ratio, (0,1]
    double w;            // productivity per day (currency)
    double t_quarantine; // quarantine days
    double m_treatment;  // delayed-treatment cost (currency)
    double r0;           // basic reproduction number

    DamageModel(double alpha_, double beta_, double w_, double t_quarantine_, double m_treatment_,
                double r0_)
        : alpha(alpha_), beta(beta_), w(w_), t_quarantine(t_quarantine_),
          m_treatment(m_treatment_), r0(r0_) {
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw std::invalid_argument("DamageModel: alpha must lie in (0,1]");
        }
        if (!(beta > 0.0 && beta <= 1.0)) {
            throw std::invalid_argument("DamageModel: beta must lie in (0,1]");
        }
        if (!(w >= 0.0)) throw std::invalid_argument("DamageModel: w must be >= 0");
        if (!(t_quarantine >= 0.0)) {
            throw std::invalid_argument("DamageModel: t_quarantine must be >= 0");
        }
        if (!(m_treatment >= 0.0)) {
            throw std::invalid_argument("DamageModel: m_treatment must be >= 0");
        }
        if (!(r0 >= 0.0)) throw std::invalid_argument("DamageModel: r0 must be >= 0");
        if (!(loss_fn_() > loss_fp_())) {
            throw std::invalid_argument(
                "DamageModel: false-negative loss must exceed false-positive loss");
        }
    }

private:
    double loss_fp_() const { return alpha * (w * t_quarantine); }
    double loss_fn_() const {
        const double bwt = beta * (w * t_quarantine);
        return m_treatment + bwt + r0 * bwt;
    }

    friend double loss_false_positive(const DamageModel&);
    friend double loss_false_negative(const DamageModel&);
};

// Average loss of a false-positive result: alpha * W * T.
inline double loss_false_positive(const DamageModel& d) {
    return d.loss_fp_();
}

// Average loss of a false-negative result: M + beta*W*T + C, where the
// spreading cost is C = r0 * beta*W*T.
inline double loss_false_negative(const DamageModel& d) {
    return d.loss_fn_();
}

// Inherent-uncertainty loss l_theta = v * theta^2 with theta ~ N(0, sigma^2),
// where sigma^2 decays exponentially as the field matures.
struct UncertaintyModel {
    double v;         // currency per unit theta^2
    double sigma0_sq; // initial variance of theta
    double m;         // learning rate (per year)

    UncertaintyModel(double v_, double sigma0_sq_, double m_) : v(v_), sigma0_sq(sigma0_sq_), m(m_) {
        if (!(v >= 0.0)) throw std::invalid_argument("UncertaintyModel: v must be >= 0");
        if (!(sigma0_sq >= 0.0)) {
            throw std::invalid_argument("UncertaintyModel: sigma0_sq must be >= 0");
        }
        if (!(m >= 0.0)) throw std::invalid_argument("UncertaintyModel: m must be >= 0");
    }
};

// Uncertainty variance after t years: sigma0_sq * exp(-m t).
inline double uncertainty_variance_at(const UncertaintyModel& u, double t) {
    if (!(t >= 0.0)) throw std::domain_error("uncertainty_variance_at: t must be >= 0");
    return u.sigma0_sq * std::exp(-u.m * t);
}

// Complete parameterization of one insured AI product.
struct RiskScenario {
    PopulationModel population;
    DamageModel damages;
    UncertaintyModel uncertainty;
    RocModel roc;
    EffortModel effort_model;
};

// Expected total loss D_AI * [(p_f*l_FP + p_m*l_FN) + v*sigma_sq].
inline double expected_loss(const RiskScenario& s, const OperatingPoint& op, double sigma_sq) {
    op.validate();
    if (!(sigma_sq >= 0.0)) throw std::domain_error("expected_loss: sigma_sq must be >= 0");
    const double misclass = op.p_f * loss_false_positive(s.damages) +
                            op.miss_rate() * loss_false_negative(s.damages);
    return population_size(s.population) * (misclass + s.uncertainty.v * sigma_sq);
}

// One realization of the total loss D_AI * (l_AI + v*theta^2): the discrete
// misclassification outcome and theta are drawn independently, in that order.
inline double sample_total_loss(const RiskScenario& s, const OperatingPoint& op, double sigma_sq,
                                RandomStream& stream) {
    op.validate();
    if (!(sigma_sq >= 0.0)) throw std::domain_error("sample_total_loss: sigma_sq must be >= 0");
    const double p_m = op.miss_rate();
    if (op.p_f + p_m > 1.0) {
        throw std::domain_error("sample_total_loss: p_f + p_m must not exceed 1");
    }
    const double u = stream.next_uniform();
    double l_ai = 0.0;
    if (u <= op.p_f) {
        l_ai = loss_false_positive(s.damages);
    } else if (u <= op.p_f + p_m) {
        l_ai = loss_false_negative(s.damages);
    }
    const double theta = stream.next_normal_var(sigma_sq);
    return population_size(s.population) * (l_ai + s.uncertainty.v * theta * theta);
}

// log E[e^{s_param * x}] of the total loss, using independence of the
// discrete and quadratic parts:
//   log[p_f e^{c l_FP} + p_m e^{c l_FN} + (1-p_f-p_m)] - (1/2) log(1 - 2 c v sigma_sq)
// with c = s_param * D_AI. Exists iff s_param * D_AI * v * sigma_sq < 1/2.
inline double log_loss_mgf(const RiskScenario& s, const OperatingPoint& op, double sigma_sq,
                           double s_param) {
    op.validate();
    if (!(sigma_sq >= 0.0)) throw std::domain_error("log_loss_mgf: sigma_sq must be >= 0");
    const double p_m = op.miss_rate();
    if (op.p_f + p_m > 1.0) {
        throw std::domain_error("log_loss_mgf: p_f + p_m must not exceed 1");
    }
    const double c = s_param * population_size(s.population);
    const double quad = 2.0 * c * s.uncertainty.v * sigma_sq;
    if (quad >= 1.0) {
        throw MgfDivergenceError("loss_mgf: diverges, s*D_AI*v*sigma_sq = " +
                                 std::to_string(0.5 * quad) + " >= 1/2");
    }
    const double a = c * loss_false_positive(s.damages);
    const double b = c * loss_false_negative(s.damages);
    double log_mix;
    if (std::max(std::abs(a), std::abs(b)) < 30.0) {
        // expm1/log1p form keeps full precision near s = 0.
        log_mix = std::log1p(op.p_f * std::expm1(a) + p_m * std::expm1(b));
    } else {
        // log-sum-exp form avoids overflow for large exponents.
        const double rest = 1.0 - op.p_f - p_m;
        const double peak = std::max({a, b, 0.0});
        double sum = rest * std::exp(-peak);
        if (op.p_f > 0.0) sum += op.p_f * std::exp(a - peak);
        if (p_m > 0.0) sum += p_m * std::exp(b - peak);
        log_mix = peak + std::log(sum);
    }
    return log_mix - 0.5 * std::log1p(-quad);
}

// E[e^{s_param * x}]; throws MgfDivergenceError when it does not exist.
inline double loss_mgf(const RiskScenario& s, const OperatingPoint& op, double sigma_sq,
                       double s_param) {
    return std::exp(log_loss_mgf(s, op, sigma_sq, s_param));
}

} // namespace ailiab
