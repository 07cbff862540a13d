#pragma once

#include <cstdint>
#include <random>

namespace graphct {

/// Seeded random source used everywhere randomness is needed.
/// A fixed seed reproduces the exact same stream on the same platform,
/// which is the determinism contract the training loop and tests rely on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(gen_);
    }

    /// Integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }

    long long poisson(double mean) {
        return std::poisson_distribution<long long>(mean)(gen_);
    }

    std::uint64_t next_u64() { return gen_(); }

    std::mt19937_64& engine() { return gen_; }

    /// Derive a decorrelated child seed for stream `stream` (splitmix64 step).
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace graphct
