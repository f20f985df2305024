#pragma once

#include <cstdint>
#include <random>

#include "dacoop/common.hpp"

namespace dacoop {

// Seeded random stream owned by exactly one episode or training run at a time.
// Double conversion is fixed here (not delegated to std distributions) so the
// produced sequences are identical across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(
            static_cast<double>(n) * uniform());
    }

    // Uniform heading in (-pi, pi].
    double uniform_angle() { return kPi - uniform() * 2.0 * kPi; }

    // Decorrelated child seed for a named sub-stream (splitmix64 finalizer).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace dacoop
