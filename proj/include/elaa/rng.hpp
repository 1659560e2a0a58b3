#pragma once

// Seeded random streams. The engine is std::mt19937_64; the variate
// transforms are written out here so draws are identical across standard
// library implementations.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace elaa {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for child stream `index` of `parent`.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return mix_seed(parent ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), rejection sampled.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % n;
    }

    double normal() {
        const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
        return r * std::cos(2.0 * std::numbers::pi * uniform());
    }

    /// Circularly-symmetric CN(0, 1): |z|^2 ~ Exp(1) with uniform phase.
    std::complex<double> complex_normal() {
        const double r = std::sqrt(-std::log1p(-uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

private:
    std::mt19937_64 engine_;
};

}  // namespace elaa
