#pragma once

#include <cstdint>

#include "rankmet/bigint.hpp"

namespace rankmet {

/// Deterministic 64-bit generator (splitmix64 seeding + xoshiro256**).
/// Identical sequences on every platform; std:: distributions are not used
/// anywhere so that reports are byte-stable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = splitmix64(x);
    }

    /// Independent stream for trial `idx` of a campaign seeded with `seed`.
    static Rng derive(std::uint64_t seed, std::uint64_t idx) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1));
        return Rng(splitmix64(x));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, n) by rejection; n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t lim = n * ((~0ULL) / n);
        std::uint64_t v = next();
        while (v >= lim) v = next();
        return v % n;
    }

    /// Uniform integer in [lo, hi] inclusive.
    long range(long lo, long hi) {
        return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }

    /// Small rational with numerator in [-h, h] and denominator in [1, h].
    Rat small_rat(long h) {
        long n = range(-h, h);
        long d = range(1, h);
        return rat_of(n, d);
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

}  // namespace rankmet
