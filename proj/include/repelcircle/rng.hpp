#pragma once

#include <cstdint>
#include <random>

namespace repelcircle {

// Addresses one logical RNG stream. Replica r of a batch uses
// stream = base + r, so merged batches are independent of worker
// scheduling and thread count.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint32_t stream = 0;

    RngSeed with_stream_offset(std::uint64_t offset) const {
        return RngSeed{seed, static_cast<std::uint32_t>(stream + offset)};
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// mt19937_64 keyed by (seed, stream) through a splitmix64 expansion.
// The same (seed, stream) gives the same draw sequence on one build of
// the library; the reproducibility tests pin exactly that contract.
inline std::mt19937_64 make_engine(const RngSeed& s) {
    std::uint64_t state =
        s.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(s.stream) + 1));
    std::uint32_t words[8];
    for (int i = 0; i < 4; ++i) {
        const std::uint64_t w = detail::splitmix64(state);
        words[2 * i] = static_cast<std::uint32_t>(w);
        words[2 * i + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words, words + 8);
    return std::mt19937_64(seq);
}

}  // namespace repelcircle
