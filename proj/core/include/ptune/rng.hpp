#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ptune {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `tag` under `parent`. Streams form a tree
/// (master -> repetition -> better() call -> target run), so any node's
/// seed depends only on its path and not on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept {
  return splitmix64(parent ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

/// FNV-1a; used to fold string keys (operator ids, families) into seeds.
constexpr std::uint64_t hash_tag(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [lo, hi].
template <typename Int>
Int uniform_int(Engine& rng, Int lo, Int hi) {
  return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

}  // namespace ptune
