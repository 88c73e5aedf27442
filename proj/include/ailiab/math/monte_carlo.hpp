#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "ailiab/math/random.hpp"

namespace ailiab {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Sample mean and standard error of n independent draws from `sample`,
// which receives the stream and returns one realization. Deterministic
// given (stream seed, stream_id, n); Welford accumulation keeps the
// variance estimate stable for large n.
template <typename Sampler>
McEstimate expectation_mc(Sampler&& sample, std::int64_t n, RandomStream& stream) {
    if (n < 2) throw std::domain_error("expectation_mc: n must be >= 2");
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = sample(stream);
        const double delta = x - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (x - mean);
    }
    const double variance = m2 / static_cast<double>(n - 1);
    return {mean, std::sqrt(variance / static_cast<double>(n))};
}

} // namespace ailiab
