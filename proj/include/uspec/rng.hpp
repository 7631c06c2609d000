#pragma once

#include <cstdint>
#include <random>

namespace uspec {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of an independent sub-stream; depends only on (master, stream), never
/// on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Named sub-streams of a single pipeline run.
enum class Stream : std::uint64_t {
    selection = 1,
    index = 2,
    discretize = 3,
    member_k = 4,
    ensemble = 5,
    consensus = 6,
    run = 7,
};

inline Rng make_rng(std::uint64_t master, Stream s) {
    return Rng(derive_seed(master, static_cast<std::uint64_t>(s)));
}

}  // namespace uspec
