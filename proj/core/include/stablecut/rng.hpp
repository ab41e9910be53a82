#pragma once

#include <cstdint>

namespace stablecut {

/// Stream labels.  A stream is identified by (master_seed, role, index, trial);
/// every consumer of randomness in this library names its stream explicitly,
/// so results are reproducible and independent of thread schedule.
enum class StreamRole : std::uint32_t {
    WomanRank = 0,  // per-woman preference sampling
    ManRank = 1,    // per-man preference sampling
    Permutation = 2,  // standalone permutation sampling
    Matching = 3,     // random perfect matchings
    Aux = 4,          // anything else (tests, shuffles)
};

/// SplitMix64 sequence whose starting state is derived from the master seed
/// and the (role, index, trial) label by the SplitMix64 finalizer:
///
///   h = mix(master + GAMMA); h = mix(h ^ role); h = mix(h ^ index);
///   state = mix(h ^ trial)
///
/// where GAMMA = 0x9E3779B97F4A7C15 and mix is the xor-shift-multiply
/// finalizer below.  Each next_u64() advances state by GAMMA and finalizes.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, StreamRole role, std::int64_t index, std::int64_t trial) {
        std::uint64_t h = mix(master_seed + kGamma);
        h = mix(h ^ static_cast<std::uint64_t>(role));
        h = mix(h ^ static_cast<std::uint64_t>(index));
        state_ = mix(h ^ static_cast<std::uint64_t>(trial));
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1; unbiased via rejection.
    std::int64_t next_below(std::int64_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return static_cast<std::int64_t>(r % bound);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace stablecut
