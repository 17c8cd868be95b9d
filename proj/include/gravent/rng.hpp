#pragma once

#include <cstdint>
#include <limits>

namespace gravent {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the output sequence depends only on (seed, key), so any
/// block of work can be regenerated independently of which thread runs it.
class KeyedStream {
public:
    KeyedStream(std::uint64_t seed, std::uint64_t key)
        : base_(mix64(mix64(seed) ^ (key * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

    std::uint64_t next() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * counter_++); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    // UniformRandomBitGenerator interface so std distributions can be used on top.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next(); }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace gravent
