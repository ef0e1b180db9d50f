#pragma once

#include <cstdint>

namespace twistorkit {

// Deterministic 64-bit stream generator (splitmix64).  Constants are the
// reference ones: increment 0x9E3779B97F4B7C15, mixers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB.  All randomized sampling in the library and the CLI is
// driven by this generator so that reports are reproducible per seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4B7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [lo, hi], inclusive
    long long rangeInt(long long lo, long long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(next() % span);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    // uniform in [-1, 1)
    double uniformSym() { return 2.0 * uniform01() - 1.0; }

private:
    std::uint64_t state_;
};

inline constexpr std::uint64_t kDefaultSeed = 7;

} // namespace twistorkit
