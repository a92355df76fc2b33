#pragma once

#include <cstdint>

namespace psl {

// splitmix64 (Vigna 2015, public domain): 64-bit state, one mixing pass per
// output. Small, fully specified, and platform-independent, so identical
// seeds give identical streams everywhere; golden vectors are pinned in the
// tests.
class RngStream {
 public:
  explicit constexpr RngStream(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), bound >= 1. Rejection keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

// splitmix64 finalizer as a standalone mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream splitting: child = derive_seed(parent, a, b). The chain is a pure
// function of (parent, a, b), so any task can rebuild its stream from the
// master seed alone and the result is independent of execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) {
  std::uint64_t h = mix64(master ^ 0xA0761D6478BD642Full);
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b));
  return h;
}

}  // namespace psl
