#pragma once

#include <cstdint>
#include <random>

namespace qjsd {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the independent sub-stream `index` of the stream `seed`.
///
/// Used for per-worker, per-triplet and per-restart streams so results do not
/// depend on how work is partitioned.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) ^ mix64(index ^ 0x6a09e667f3bcc909ULL));
}

/// The engine behind every random draw in the library.
using Engine = std::mt19937_64;

} // namespace qjsd
