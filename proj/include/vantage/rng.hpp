#pragma once

#include <cstdint>

namespace vantage {

// Deterministic seed combinator (splitmix64 finalizer). Used to derive
// independent streams from a master seed, e.g. per trial, per tree node.
// Must stay stable: recorded experiment configs rely on it.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Small, portable PRNG (splitmix64 stream). std::mt19937 would do, but the
// distributions in <random> are not bit-identical across standard libraries,
// and batch results must reproduce exactly on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound). Unbiased (Lemire's method).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t reject_below = (0 - bound) % bound;
        while (true) {
            __uint128_t m = static_cast<__uint128_t>(next_u64()) * bound;
            if (static_cast<std::uint64_t>(m) >= reject_below) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

}  // namespace vantage
