#pragma once

#include <cstdint>
#include <limits>

namespace gibbs {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of 64-bit words into one seed.
///
/// hash64(a, b, c) = mix64(mix64(mix64(a ^ K0) ^ (b + K1)) ^ (c + K2)), with
/// fixed odd constants. This is the replication-seed rule of the experiment
/// runner and must stay stable across versions.
constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a ^ 0x6a09e667f3bcc909ULL) ^ (b + 0xbb67ae8584caa73bULL));
}
constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) noexcept {
  return mix64(hash64(a, b) ^ (c + 0x3c6ef372fe94f82bULL));
}

/// Counter-based 64-bit generator.
///
/// Output i of stream (seed, stream) is mix64(key + (i + 1) * golden), where
/// key = hash64(seed, stream). Streams are therefore addressed, not advanced:
/// worker k of a replication simply uses Rng(seed, k). Satisfies
/// UniformRandomBitGenerator so it composes with <algorithm>.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), key_(hash64(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }
  /// Uniform on (0, 1); safe to take logs of.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }
  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  double normal() noexcept;
  double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
  double exponential(double rate) noexcept;
  double laplace(double rate) noexcept;
  double gamma(double shape) noexcept;
  double student_t(double df) noexcept;
  std::uint64_t poisson(double mean) noexcept;
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace gibbs
