#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "ailiab/math/gaussian.hpp"

namespace ailiab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

// Seedable random stream. Identical (seed, stream_id) pairs yield
// bit-identical draw sequences across runs: the engine is the
// standard-specified mt19937_64 and the normal transform is an explicit
// Box-Muller, so no implementation-defined distribution code is involved.
// Parallel work must use distinct stream_ids per task.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream_id),
            static_cast<std::uint32_t>(stream_id >> 32),
        };
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Uniform on (0, 1].
    double next_uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine branch; two uniforms per draw).
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

    // Normal with the given variance.
    double next_normal_var(double variance) {
        if (!(variance >= 0.0)) {
            throw std::domain_error("RandomStream::next_normal_var: variance must be >= 0");
        }
        return std::sqrt(variance) * next_normal();
    }

    // Independent stream derived from this one's identity; does not
    // consume or disturb this stream's state.
    RandomStream derive(std::uint64_t key) const {
        return RandomStream(seed_, detail::splitmix64(stream_id_ ^ detail::splitmix64(key)));
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

} // namespace ailiab
