// SPDX-License-Identifier: Apache-2.0
//
// specband: empirical-Bayes frequency estimation for noisy multi-sinusoid signals
#ifndef SPECBAND_RNG_HPP
#define SPECBAND_RNG_HPP

#include <cmath>
#include <cstdint>

namespace specband {

/// Splittable counter-based generator (SplitMix64, the SplittableRandom
/// scheme of Steele/Lea/Flood).  The state is a plain counter advanced by an
/// odd gamma and hashed on output, so substreams can be derived in O(1) with
/// split_at() and independent trials draw from disjoint streams regardless
/// of scheduling order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed), gamma_(kGoldenGamma) {}
  SplitMix64(std::uint64_t seed, std::uint64_t gamma) : state_(seed), gamma_(gamma | 1u) {}

  std::uint64_t next_u64() { return mix64(next_seed()); }

  /// Derive an independent substream; advances this generator by two steps.
  SplitMix64 split() {
    const std::uint64_t seed = mix64(next_seed());
    const std::uint64_t gamma = mix_gamma(next_seed());
    return SplitMix64(seed, gamma);
  }

  /// The substream the (index+1)-th split() call would produce, without
  /// disturbing this generator.  Counter jump + split, all O(1).
  SplitMix64 split_at(std::uint64_t index) const {
    SplitMix64 jumped(state_ + 2u * index * gamma_, gamma_);
    return jumped.split();
  }

  /// Uniform on [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps the log finite
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t next_seed() { return state_ += gamma_; }

  // Stafford mix13.
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // MurmurHash3 finalizer, then force the gamma odd and not too regular.
  static std::uint64_t mix_gamma(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    z = (z ^ (z >> 33)) | 1u;
    if (__builtin_popcountll(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaull;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace specband

#endif  // SPECBAND_RNG_HPP
