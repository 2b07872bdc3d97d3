#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "revealnet/flow.hpp"

namespace revealnet {

// SplitMix64 (Steele, Lea, Flood 2014). Used as a stateless finalizer for
// seed derivation and as the seeding routine for xoshiro state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
    return splitmix64_next(x);
}

/// xoshiro256++ (Blackman & Vigna 2019), seeded from a single 64-bit value
/// via SplitMix64. All randomness in the framework flows through this
/// generator so that runs are reproducible from config seeds alone.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& w : s_)
            w = splitmix64_next(seed);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform in (0, 1]: 53 mantissa bits, never zero so it is log-safe
    double uniform01() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// standard normal via Box-Muller; always consumes exactly two words so
    /// the stream position per draw is fixed regardless of the value drawn
    double standard_normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

/// Derives an independent substream seed from a master seed and a tag.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t tag) {
    return mix64(master ^ mix64(tag ^ 0x5851f42d4c957f2dULL));
}

/// FNV-1a over the 192-bit wire form; stable across platforms, unlike
/// std::hash, so per-flow substreams are reproducible.
inline std::uint64_t stable_flow_hash(const FlowKey& key) {
    const auto wire = encode_flow_key(key);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::uint8_t b : wire) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Substream seed for one flow: adding or removing flows never perturbs the
/// draws made for any other flow.
inline std::uint64_t flow_stream_seed(std::uint64_t master, const FlowKey& key) {
    return stream_seed(master, stable_flow_hash(key));
}

} // namespace revealnet
