#pragma once

#include <cmath>
#include <cstdint>

#include "mixedindep/math/special.hpp"

namespace mixedindep {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

} // namespace detail

// xoshiro256++ seeded through splitmix64. Samplers are hand-rolled so that a
// (seed, stream) pair reproduces the identical sequence on every platform and
// under any thread schedule.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); safe input for quantile transforms.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double exponential(double rate = 1.0) { return -std::log(uniform01()) / rate; }

    double normal() { return math::norm_quantile(uniform01()); }

    // Marsaglia-Tsang for shape >= 1, boosted by u^{1/shape} below 1.
    double gamma(double shape, double rate = 1.0) {
        if (shape < 1.0) {
            const double u = uniform01();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

private:
    std::uint64_t state_[4];
};

// Stream derivation: hash(seed, index) so replicate i gets the same generator
// no matter which worker runs it.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL);
    const std::uint64_t a = detail::splitmix64(sm);
    const std::uint64_t b = detail::splitmix64(sm);
    return Rng(a ^ detail::rotl(b, 32) ^ index);
}

} // namespace mixedindep
