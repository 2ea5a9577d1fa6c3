#pragma once

#include <cmath>
#include <cstdint>

namespace llsrpca {

/// SplitMix64 finalizer. Used to derive independent sub-stream seeds from a
/// base seed and an index, so per-component and per-band generation is
/// order-independent and reproducible across platforms.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator seeded through SplitMix64. All noise synthesis goes
/// through this class; the algorithm name is recorded in output metadata so
/// draws can be reproduced independently of the standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        for (auto& word : state_) {
            seed += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = seed;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    static constexpr const char* algorithm() { return "xoshiro256** / splitmix64"; }

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

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n). Multiply-shift bounding; the bias is
    /// below 2^-64 per draw, irrelevant for noise synthesis.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double next_gaussian() {
        const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4]{};
};

}  // namespace llsrpca
