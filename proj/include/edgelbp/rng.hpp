#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>

namespace edgelbp {

/// SplitMix64 finalizer. Used to derive independent child seeds
/// (per repetition, per tree) from a base seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed `index` of `seed`: splitmix64(seed + golden * (index + 1)).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Seedable generator with a platform-stable stream.
///
/// The raw stream is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every derived quantity is computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n > 0, by rejection.
  std::size_t below(std::size_t n);

  /// Fisher-Yates, last index first.
  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edgelbp
