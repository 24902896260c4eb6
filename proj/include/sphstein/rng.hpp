#ifndef SPHSTEIN_RNG_HPP
#define SPHSTEIN_RNG_HPP

#include <cstdint>
#include <random>

namespace sphstein {

// Replicate-indexed RNG streams. Replicate r of a run with master seed s
// always gets the same engine state, no matter which worker executes it or
// how many workers there are.
inline std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate,
                                     std::uint64_t stream = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace sphstein

#endif
