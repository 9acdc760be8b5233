#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace primecvp {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to turn structured tags into stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent substream seed from a master seed and a tuple of
/// tags (epoch, index, bit-length, ...). Order of tags matters.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(master);
    for (std::uint64_t tag : tags) {
        h = mix64(h ^ mix64(tag + 0x632be59bd9b4e019ULL));
    }
    return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace primecvp
