#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ailiab/errors.hpp"
#include "ailiab/math/gaussian.hpp"
#include "ailiab/math/quadrature.hpp"

namespace ailiab {

// One point on the ROC square: false-positive rate and true-positive rate.
// The miss rate p_m is 1 - p_t by definition.
struct OperatingPoint {
    double p_f = 0.0;
    double p_t = 0.0;

    double miss_rate() const { return 1.0 - p_t; }

    void validate() const {
        if (!(p_f >= 0.0 && p_f <= 1.0) || !(p_t >= 0.0 && p_t <= 1.0)) {
            throw std::invalid_argument("OperatingPoint: rates must lie in [0,1]");
        }
    }
};

// Binormal ROC family: p_f = Q(d - Q^{-1}(1 - p_t)) with d = d_const * n_samples,
// where d_const measures the separation between the class-conditional
// score distributions per training sample.
struct RocModel {
    double d_const;

    explicit RocModel(double d) : d_const(d) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw std::invalid_argument("RocModel: d_const must be finite and > 0");
        }
    }
};

// Externally supplied ROC given as a point list, piecewise-linearly
// interpolated. Always contains (0,0) and (1,1) after construction.
struct EmpiricalRoc {
    std::vector<OperatingPoint> points;

    // Validates monotonicity and attaches the corner points when absent.
    static EmpiricalRoc from_points(std::vector<OperatingPoint> pts) {
        if (pts.size() < 2) {
            throw std::invalid_argument("EmpiricalRoc: need at least 2 points");
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            pts[i].validate();
            if (i > 0 && (pts[i].p_f < pts[i - 1].p_f || pts[i].p_t < pts[i - 1].p_t)) {
                throw std::invalid_argument(
                    "EmpiricalRoc: points must be nondecreasing in p_f and p_t (violation at index " +
                    std::to_string(i) + ")");
            }
        }
        if (pts.front().p_f != 0.0 || pts.front().p_t != 0.0) {
            pts.insert(pts.begin(), OperatingPoint{0.0, 0.0});
        }
        if (pts.back().p_f != 1.0 || pts.back().p_t != 1.0) {
            pts.push_back(OperatingPoint{1.0, 1.0});
        }
        EmpiricalRoc roc;
        roc.points = std::move(pts);
        return roc;
    }
};

// Point on the model curve at the given true-positive rate. The p_t = 0 and
// p_t = 1 boundaries map to the exact ROC corners.
inline OperatingPoint roc_point(const RocModel& model, double n_samples, double p_t) {
    if (!(n_samples >= 0.0)) throw std::domain_error("roc_point: n_samples must be >= 0");
    if (!(p_t >= 0.0 && p_t <= 1.0)) {
        throw std::domain_error("roc_point: p_t must lie in [0,1]");
    }
    if (p_t == 0.0) return {0.0, 0.0};
    if (p_t == 1.0) return {1.0, 1.0};
    const double d = model.d_const * n_samples;
    return {gaussian_q(d - gaussian_q_inv(1.0 - p_t)), p_t};
}

// Symmetric errors at the fair threshold (closest curve point to (0,1)):
// p_f = p_m = Q(d_const * n_samples).
inline OperatingPoint fair_threshold_errors(const RocModel& model, double n_samples) {
    if (!(n_samples >= 0.0)) {
        throw std::domain_error("fair_threshold_errors: n_samples must be >= 0");
    }
    const double q = gaussian_q(model.d_const * n_samples);
    return {q, 1.0 - q};
}

// Area under the model ROC curve by 2001-point composite Simpson over p_f.
// The endpoints are attached exactly; the result lies in [0.5, 1).
inline double auc(const RocModel& model, double n_samples) {
    if (!(n_samples >= 0.0)) throw std::domain_error("auc: n_samples must be >= 0");
    const double d = model.d_const * n_samples;
    auto p_t_at = [d](double p_f) {
        if (p_f <= 0.0) return 0.0;
        if (p_f >= 1.0) return 1.0;
        return gaussian_q(gaussian_q_inv(p_f) - d);
    };
    return composite_simpson(p_t_at, 0.0, 1.0, 2001);
}

// Trapezoidal area under a piecewise-linear empirical ROC.
inline double auc_empirical(const EmpiricalRoc& roc) {
    if (roc.points.size() < 2) {
        throw std::invalid_argument("auc_empirical: need at least 2 points");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < roc.points.size(); ++i) {
        const auto& a = roc.points[i - 1];
        const auto& b = roc.points[i];
        area += (b.p_f - a.p_f) * 0.5 * (a.p_t + b.p_t);
    }
    return area;
}

// Balanced accuracy of an operating point.
inline double accuracy(const OperatingPoint& op) {
    op.validate();
    return (op.p_t + 1.0 - op.p_f) / 2.0;
}

// Reads a two-column `p_f,p_t` CSV with a one-line header. Validation
// failures report the 1-based line number.
inline EmpiricalRoc load_empirical_roc(std::istream& in) {
    std::string line;
    std::vector<OperatingPoint> pts;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            // first non-comment line is the column header
            have_header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
            throw ConfigError("empirical ROC: expected `p_f,p_t`", line_no);
        }
        OperatingPoint op;
        try {
            op.p_f = std::stod(a);
            op.p_t = std::stod(b);
        } catch (const std::exception&) {
            throw ConfigError("empirical ROC: non-numeric value", line_no);
        }
        try {
            op.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("empirical ROC: ") + e.what(), line_no);
        }
        if (!pts.empty() && (op.p_f < pts.back().p_f || op.p_t < pts.back().p_t)) {
            throw ConfigError("empirical ROC: points must be sorted ascending", line_no);
        }
        pts.push_back(op);
    }
    if (!have_header) {
        throw ConfigError("empirical ROC: empty input", std::max(line_no, 1));
    }
    if (pts.size() < 2) {
        throw ConfigError("empirical ROC: need at least 2 data rows", line_no);
    }
    return EmpiricalRoc::from_points(std::move(pts));
}

inline EmpiricalRoc load_empirical_roc_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("empirical ROC: cannot open " + path);
    return load_empirical_roc(in);
}

} // namespace ailiab
