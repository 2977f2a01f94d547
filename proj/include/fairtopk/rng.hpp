#pragma once

#include <cstdint>

namespace fairtopk {

// Reproducibility contract: every Monte Carlo result is a pure function of
// (master_seed, substream_index). The generators below are pinned to
// SplitMix64 for seed mixing and xoshiro256** for the stream because the
// standard library's engines and distributions are implementation-defined
// and would break bit-identical replay across platforms.

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t substream_index = 0;
};

namespace detail {

// SplitMix64 finalizer (Steele, Lea & Flood).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) {
        SplitMix64 sm(seed);
        bool nonzero = false;
        for (auto& w : s_) {
            w = sm.next();
            nonzero = nonzero || w != 0;
        }
        if (!nonzero) s_[0] = 0x9E3779B97F4A7C15ULL;  // all-zero state is absorbing
    }

    std::uint64_t next() {
        const std::uint64_t result = detail::rotl64(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = detail::rotl64(s_[3], 45);
        return result;
    }

    // uniform on [0, 1) with 53 random bits
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // unbiased uniform on [0, bound); Lemire's multiply-shift rejection
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t s_[4];
};

// Independent generator for one substream. Two mixing rounds decorrelate the
// (master, index) pair before the state fill; substreams are random-access so
// batch generation parallelizes without coordination.
inline Xoshiro256StarStar substream_rng(const SeedSpec& seed) {
    std::uint64_t s = detail::mix64(seed.master_seed);
    s = detail::mix64(s ^ detail::mix64(seed.substream_index + 0xBF58476D1CE4E5B9ULL));
    return Xoshiro256StarStar(s);
}

}  // namespace fairtopk
