#pragma once

#include <cstdint>

namespace viewsync {

/// splitmix64. Small, seedable, and independent of standard-library
/// distribution internals, so seeded runs reproduce byte-identically on any
/// toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Derives an independent stream, used to decouple subsystems (delays,
  /// leader draw, adversary) from each other's consumption order.
  Rng fork(std::uint64_t salt) {
    Rng r(state_ ^ (0xA0761D6478BD642Full * (salt + 1)));
    r.next();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace viewsync
