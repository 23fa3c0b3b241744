#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace fvault {

using Rng = std::mt19937_64;

// SplitMix64: cheap counter-seeded generator used for per-trial substreams.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Derives an independent seed for a named substream of a master seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mix(seed ^ (stream * 0xD1B54A32D192ED03ull));
    mix();
    return mix();
}

// mt19937_64 seeded directly with neighbouring integers yields correlated
// early outputs, so every seed is scrambled first.
inline Rng seeded_rng(std::uint64_t seed) {
    SplitMix64 mix(seed);
    std::seed_seq seq{mix(), mix(), mix(), mix()};
    return Rng(seq);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
    return seeded_rng(derive_seed(seed, stream));
}

// Stream ids used by the vault construction and simulation.
namespace streams {
inline constexpr std::uint64_t genuine_selection = 1;
inline constexpr std::uint64_t chaff = 2;
inline constexpr std::uint64_t shuffle = 3;
inline constexpr std::uint64_t quiz = 4;
inline constexpr std::uint64_t lattice = 5;
inline constexpr std::uint64_t share = 6;
inline constexpr std::uint64_t second_finger = 7;
inline constexpr std::uint64_t template_gen = 8;
inline constexpr std::uint64_t recapture = 9;
}  // namespace streams

}  // namespace fvault
