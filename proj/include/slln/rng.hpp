#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace slln {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of the child stream for one path; depends only on (master, index),
/// so ensembles do not care which worker draws which path.
constexpr std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t path_index) {
    return mix64(mix64(master_seed + 0x9E3779B97F4A7C15ULL) ^ (path_index * 0xD1B54A32D192ED03ULL + 1));
}

/// Per-path generator. The engine is std::mt19937_64; the real-valued draws
/// are built here from raw bits because the std distributions are not
/// specified bit-for-bit across standard libraries.
class PathRng {
public:
    explicit PathRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Exponential with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    /// Standard normal via Box-Muller (one value per call, the pair's twin
    /// is discarded so every call consumes exactly two uniforms).
    double normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// +1 or -1 with probability 1/2 each.
    double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace slln
