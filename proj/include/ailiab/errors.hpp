#pragma once

#include <stdexcept>
#include <string>

namespace ailiab {

// Root bracketing failed: f(lo) and f(hi) have the same sign.
struct BracketError : std::domain_error {
    using std::domain_error::domain_error;
};

// An iterative method ran out of iterations before meeting its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// E[e^{s x}] does not exist for the requested s (quadratic-normal term diverges).
struct MgfDivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

// SGD training produced non-finite weights or loss.
struct TrainingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario configuration problem; carries the offending line when known.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    int line;
};

} // namespace ailiab
