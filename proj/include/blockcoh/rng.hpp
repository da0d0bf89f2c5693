#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace blockcoh {

/// SplitMix64 finalizer (Stafford "Mix13" constants).
std::uint64_t mix64(std::uint64_t z);

/// Counter-based 64-bit generator: output i is mix64(key + i * 0x9e3779b97f4a7c15).
///
/// Substreams are derived by hashing a seed with a path of integers
/// (trial, block, ...), so experiment results do not depend on which thread
/// runs which trial. Normal deviates use Box-Muller on two uniforms; the
/// distributions are implemented here rather than taken from <random> so that
/// sampled frames are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Stream keyed by hash(seed, path...).
  static CounterRng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound), rejection sampled.
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal deviate.
  double normal();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// hash(seed, path...) as used by CounterRng::substream.
std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

}  // namespace blockcoh
