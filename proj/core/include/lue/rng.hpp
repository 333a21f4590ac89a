#pragma once

#include <cmath>
#include <cstdint>

namespace lue {

// Counter-based generator: output k is mix64(seed + k * golden), the
// SplitMix64 finalizer over an affine counter walk. Any counter can be
// evaluated independently, so parallel consumers never share state.
// Streams are derived as seed_i = mix64(seed ^ mix64(i + 1)).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(seed_ + counter * 0x9E3779B97F4A7C15ULL + 0x9E3779B97F4A7C15ULL);
    }

    // Uniform in the open interval (0,1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal pair via Box-Muller from counters (2k, 2k+1).
    void gaussian_pair(std::uint64_t k, double& g0, double& g1) const {
        double u1 = uniform(2 * k);
        double u2 = uniform(2 * k + 1);
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        g0 = r * std::cos(t);
        g1 = r * std::sin(t);
    }

    CounterRng stream(std::uint64_t i) const {
        return CounterRng(mix64(seed_ ^ mix64(i + 1)));
    }

private:
    std::uint64_t seed_;
};

} // namespace lue
