// Copyright 2026 the voxaug authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXAUG_RNG_HPP
#define VOXAUG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace voxaug {

// Standard-library distributions are implementation-defined, so every draw
// below is spelled out explicitly: outputs must be bit-identical across
// compilers, standard libraries and thread schedules.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic pseudorandom stream (xoshiro256**), derived from a key so
/// that identical (master_seed, case_index, transform_index) triples yield
/// identical draw sequences regardless of execution order or thread count.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t case_index, std::uint64_t transform_index) {
        std::uint64_t mix = master_seed;
        std::uint64_t scramble = splitmix64(mix);
        mix = scramble ^ (case_index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
        scramble = splitmix64(mix);
        mix = scramble ^ (transform_index * 0xC2B2AE3D27D4EB4FULL + 0x9E3779B97F4A7C15ULL);
        for (auto& word : state_) word = splitmix64(mix);
    }

    explicit RngStream(std::uint64_t seed) : RngStream(seed, 0, 0) {}

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.141592653589793238462643 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Probability gate: one uniform draw compared against p.
    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace voxaug

#endif
