#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ailiab/contract.hpp"
#include "ailiab/risk.hpp"
#include "ailiab/roc.hpp"

namespace ailiab {

// Externally attested prerequisite with its evidence note. Every flag is set
// explicitly at construction; an empty checklist means no prerequisites were
// declared.
struct ChecklistItem {
    std::string name;
    bool satisfied;
    std::string note;
};

struct QualityChecklist {
    std::vector<ChecklistItem> items;

    bool all_satisfied() const {
        for (const auto& item : items) {
            if (!item.satisfied) return false;
        }
        return true;
    }
};

// Insurability requirement verdict: regulatory accuracy floor, market
// premium ceiling, and quality prerequisites must all hold.
struct InsurabilityVerdict {
    bool accuracy_ok = false;
    bool premium_ok = false;
    bool prerequisites_ok = false;
    bool insurable = false;
    double acc_value = 0.0;
    double premium_value = 0.0;
};

inline constexpr double accuracy_requirement = 0.8; // regulatory floor, strict inequality

// Evaluates the three insurability conditions at one operating point:
// ACC > 0.8, full-coverage fair premium <= max_premium, all checklist flags
// true.
inline InsurabilityVerdict assess(const RiskScenario& s, const OperatingPoint& op, double sigma_sq,
                                  double max_premium, const QualityChecklist& checklist) {
    if (!(max_premium >= 0.0)) throw std::invalid_argument("assess: max_premium must be >= 0");
    InsurabilityVerdict v;
    v.acc_value = accuracy(op);
    v.premium_value = fair_premium(s, op, sigma_sq, 1.0);
    v.accuracy_ok = v.acc_value > accuracy_requirement;
    v.premium_ok = v.premium_value <= max_premium;
    v.prerequisites_ok = checklist.all_satisfied();
    v.insurable = v.accuracy_ok && v.premium_ok && v.prerequisites_ok;
    return v;
}

struct RegionCell {
    double p_f = 0.0;
    double p_t = 0.0;
    bool accuracy_ok = false;
    bool premium_ok = false;
    bool insurable = false;
    double premium = 0.0;
};

// Insurable-region sweep over the ROC square at a fixed uncertainty level.
// Cells are evaluated at their centers, row-major with p_f ascending in the
// outer loop.
struct RegionGrid {
    int cells_per_axis = 0;
    double sigma_sq = 0.0;
    double max_premium = 0.0;
    std::vector<RegionCell> cells;

    const RegionCell& at(int i_pf, int i_pt) const {
        return cells[static_cast<std::size_t>(i_pf) * static_cast<std::size_t>(cells_per_axis) +
                     static_cast<std::size_t>(i_pt)];
    }
};

inline RegionGrid insurable_region(const RiskScenario& s, double sigma_sq, double max_premium,
                                   int cells_per_axis) {
    if (cells_per_axis != 100 && cells_per_axis != 200 && cells_per_axis != 500) {
        throw std::invalid_argument("insurable_region: resolution must be 1/100, 1/200 or 1/500");
    }
    RegionGrid grid;
    grid.cells_per_axis = cells_per_axis;
    grid.sigma_sq = sigma_sq;
    grid.max_premium = max_premium;
    grid.cells.reserve(static_cast<std::size_t>(cells_per_axis) *
                       static_cast<std::size_t>(cells_per_axis));
    const QualityChecklist no_prereqs{}; // sweep assumes prerequisites hold
    const double step = 1.0 / static_cast<double>(cells_per_axis);
    for (int i = 0; i < cells_per_axis; ++i) {
        const double p_f = (static_cast<double>(i) + 0.5) * step;
        for (int j = 0; j < cells_per_axis; ++j) {
            const double p_t = (static_cast<double>(j) + 0.5) * step;
            const OperatingPoint op{p_f, p_t};
            const InsurabilityVerdict v = assess(s, op, sigma_sq, max_premium, no_prereqs);
            grid.cells.push_back(
                {p_f, p_t, v.accuracy_ok, v.premium_ok, v.insurable, v.premium_value});
        }
    }
    return grid;
}

enum class PricePoint { lower, mid, upper };

// Premium trajectory as the uncertainty variance decays. premiums[i] is the
// requested price point at sigma^2(t_i); +infinity marks times where the
// upper bound diverges. The floor is the sigma^2 -> 0 limit of the fair
// premium (pure misclassification risk).
struct PremiumSchedule {
    std::vector<double> times;
    std::vector<double> premiums;
    double floor = 0.0;
};

inline PremiumSchedule premium_schedule(const RiskScenario& s, const OperatingPoint& op,
                                        double rho, std::span<const double> t_grid,
                                        PricePoint price_point, double epsilon) {
    if (t_grid.empty()) throw std::invalid_argument("premium_schedule: t_grid must be nonempty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0)) {
            throw std::invalid_argument("premium_schedule: times must be >= 0");
        }
        if (i > 0 && t_grid[i] < t_grid[i - 1]) {
            throw std::invalid_argument("premium_schedule: times must be nondecreasing");
        }
    }
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("premium_schedule: rho must lie in (0,1]");
    }
    PremiumSchedule out;
    out.floor = rho * population_size(s.population) *
                (op.p_f * loss_false_positive(s.damages) +
                 op.miss_rate() * loss_false_negative(s.damages));
    out.times.assign(t_grid.begin(), t_grid.end());
    out.premiums.reserve(t_grid.size());
    for (const double t : t_grid) {
        const double sig_sq = uncertainty_variance_at(s.uncertainty, t);
        double premium = 0.0;
        switch (price_point) {
        case PricePoint::lower:
            premium = fair_premium(s, op, sig_sq, rho);
            break;
        case PricePoint::mid: {
            const PremiumInterval iv = premium_interval(s, op, sig_sq, rho, epsilon);
            premium = 0.5 * (iv.lower + iv.upper);
            break;
        }
        case PricePoint::upper:
            premium = premium_interval(s, op, sig_sq, rho, epsilon).upper;
            break;
        }
        out.premiums.push_back(premium);
    }
    return out;
}

// First time the fair premium drops to max_premium, by closed-form inversion
// of rho*D_AI*(misclass + v*sigma0^2 e^{-mt}) = max_premium. Returns 0 when
// already insurable, nullopt ("never") when the floor alone exceeds the
// ceiling or nothing decays.
inline std::optional<double> first_insurable_time(const RiskScenario& s, const OperatingPoint& op,
                                                  double max_premium, double rho) {
    if (!(max_premium >= 0.0)) {
        throw std::invalid_argument("first_insurable_time: max_premium must be >= 0");
    }
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("first_insurable_time: rho must lie in (0,1]");
    }
    op.validate();
    const double dai = population_size(s.population);
    const double floor = rho * dai *
                         (op.p_f * loss_false_positive(s.damages) +
                          op.miss_rate() * loss_false_negative(s.damages));
    const double surcharge0 = rho * dai * s.uncertainty.v * s.uncertainty.sigma0_sq;
    if (floor + surcharge0 <= max_premium) return 0.0;
    if (floor >= max_premium) return std::nullopt;
    if (s.uncertainty.m == 0.0) return std::nullopt;
    return std::log(surcharge0 / (max_premium - floor)) / s.uncertainty.m;
}

} // namespace ailiab
