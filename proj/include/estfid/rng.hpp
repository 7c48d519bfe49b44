#pragma once

// Counter-based deterministic random numbers: every (seed, stream, counter)
// triple maps to an independent draw through a SplitMix64-style finalizer
// chain, so parallel consumers need no shared state and replays are exact.

#include <cstdint>

namespace estfid {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ stream);
  h = mix64(h ^ counter);
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits of the hash.
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(counter_hash(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform double in (-1, 1), excluding exact zero denormal-free.
inline double uniform_sym(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return 2.0 * uniform01(seed, stream, counter) - 1.0;
}

}  // namespace estfid
