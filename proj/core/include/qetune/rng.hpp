#pragma once

#include <cstdint>
#include <random>

namespace qetune {

/// splitmix64 finalizer; used to derive independent stream seeds from a
/// user seed plus stream indices.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x517cc1b727220a95ull));
}

/// Uniform double in [0, 1) with 53 random bits. Hand-rolled so sampled
/// output is reproducible independent of the standard library's
/// distribution internals.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) via 128-bit multiply (Lemire, biased by
/// less than 2^-64; accepted for reproducibility and speed).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * bound) >> 64);
}

/// Uniform integer in [lo, hi] inclusive.
inline long long uniform_int(std::mt19937_64& rng, long long lo,
                             long long hi) {
  return lo + static_cast<long long>(uniform_below(
                  rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

}  // namespace qetune
