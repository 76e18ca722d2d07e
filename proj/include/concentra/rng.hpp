// Seeded random streams.  A (seed, stream) pair fully determines the
// sequence, so parallel trials stay reproducible regardless of scheduling.

#ifndef CONCENTRA_RNG_HPP
#define CONCENTRA_RNG_HPP

#include <cstdint>
#include <random>

namespace concentra {

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace concentra

#endif  // CONCENTRA_RNG_HPP
