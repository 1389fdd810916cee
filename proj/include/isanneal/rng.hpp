#pragma once

#include <cstdint>
#include <random>

namespace isanneal {

/// SplitMix64 finalizer. Used only to derive seeds, never as a stream generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of sample `k` at vertex count `n`:
///   splitmix64(splitmix64(splitmix64(master) ^ n) ^ k)
/// This formula is part of the output contract; changing it changes every CSV.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n, std::uint64_t k) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ n) ^ k);
}

/// Stream generator. std::mt19937_64 has a fully specified output sequence, so
/// together with `uniform01` results are identical on every conforming platform.
using Engine = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits. std::uniform_real_distribution
/// is implementation-defined, hence not used.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace isanneal
