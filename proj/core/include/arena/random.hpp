#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace arena {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform_unit(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
inline double uniform_open_closed(Rng& rng)
{
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform index in [0, n). Uses rejection so results do not depend on the
/// standard library's distribution implementation.
inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) {
    draw = rng();
  }
  return static_cast<std::size_t>(draw % bound);
}

inline bool coin_flip(Rng& rng) { return (rng() >> 63) != 0; }

inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `index` of a run seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
  return splitmix64(seed ^ splitmix64(index));
}

}  // namespace arena
