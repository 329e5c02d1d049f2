#pragma once

#include <cstdint>
#include <random>

namespace qka {

using Rng = std::mt19937_64;

/// Independent stream `stream` of the run seeded by `seed`.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x51a7u};
  return Rng(seq);
}

/// Uniform in [0, 1) from the top 53 bits; independent of the standard
/// library's distribution implementation.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int random_sign(Rng& rng) { return (rng() >> 63) ? 1 : -1; }

}  // namespace qka
