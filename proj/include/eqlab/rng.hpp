#ifndef EQLAB_RNG_HPP
#define EQLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace eqlab::rng {

/// splitmix64 finalizer; a fixed, documented bit mixer.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic fan-out from a master seed to per-member seeds. This is the
/// only seed-derivation rule in the library; no wall-clock entropy exists
/// anywhere.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

/// 53-bit dyadic uniform draws on top of std::mt19937_64, whose output
/// sequence is pinned by the C++ standard. Samplers compare these integers
/// against exact rational thresholds, so sampling is bit-reproducible across
/// platforms.
class DyadicDraws {
 public:
  explicit DyadicDraws(std::uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [0, 2^53); the draw represents the dyadic rational
  /// value bits/2^53.
  std::uint64_t bits53() { return eng_() >> 11; }

 private:
  std::mt19937_64 eng_;
};

inline constexpr std::uint64_t dyadic_denominator = 1ULL << 53;

}

#endif
