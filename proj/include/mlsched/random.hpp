#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mlsched {

/// Derives the seed of an independent sub-stream from a user seed and a
/// purpose tag ("instance", "perturb", "rand", "saa", ...). The tag is hashed
/// with 64-bit FNV-1a and mixed with the seed through two SplitMix64 rounds.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seeded random stream used by every randomized operation.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here rather than taken from
/// <random>, because the standard distributions are implementation-defined
/// and would break cross-platform reproducibility:
///   - uniform integers use rejection sampling on the raw 64-bit output;
///   - uniform reals take the top 53 bits, giving a value in [0, 1);
///   - normal variates use the Box-Muller transform, consuming two uniforms
///     per pair and returning the cosine branch first, then the sine branch.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view tag) : engine_(derive_seed(seed, tag)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in the closed range [lo, hi]. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Uniform real in [0, 1).
  double uniform01();

  /// Standard normal variate.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mlsched
