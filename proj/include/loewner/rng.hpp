#pragma once

#include <cstdint>

namespace loewner {

// Splitmix64 generator. All randomness in the library flows through this so
// that results are bit-identical across platforms and standard libraries
// (std::uniform_real_distribution makes no such guarantee).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [a,b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Uniform in [-1,1).
    double symmetric() { return 2.0 * uniform01() - 1.0; }

    // Independent child stream for sample index k (stream splitting).
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t k) {
        SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (k + 1)));
        return SplitMix64(mixer.next());
    }

private:
    std::uint64_t state_;
};

} // namespace loewner
