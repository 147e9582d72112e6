#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace l1persist {

/// Every stochastic routine draws from a 64-bit Mersenne Twister. Normal
/// deviates come from std::normal_distribution, so bit-identical output is
/// guaranteed for a fixed standard library (libstdc++ here).
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a base seed and a path of indices, e.g.
/// (master, lambda_index, rep_index). Distinct paths give unrelated streams
/// and the result does not depend on the order in which children are drawn.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace l1persist
