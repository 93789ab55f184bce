#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fsotrade {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream from a master seed and a coordinate path
/// (e.g. {point, epoch, relay}). The result does not depend on evaluation
/// order, so work can be scheduled freely.
inline Rng derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = mix64(master);
    for (auto c : path) state = mix64(state ^ mix64(c + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(state >> 32)};
    return Rng(seq);
}

}  // namespace fsotrade
