#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace edurec {

// SplitMix64 (Steele, Lea, Flood 2014). Every stochastic step in the
// project draws from this generator so that seeds reproduce across builds
// and platforms; std:: distributions are deliberately not used because
// their output is implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() noexcept;

  // Uniform in [0, n). Rejection sampling, no modulo bias. n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Sum of `trials` Bernoulli(p) draws.
  int binomial(int trials, double p) noexcept;

  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    // Fisher-Yates, walking from the back.
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

// Independent child seed for sub-stream `stream` of `seed`. Used to give
// every forest tree, node and session its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// FNV-1a 64-bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace edurec
