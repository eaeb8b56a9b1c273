#pragma once

#include <cstdint>
#include <random>

namespace idelek {

/* Seeded sampler with hand-rolled bounded draws. std::mt19937_64's output
 * sequence is pinned by the standard; the distribution adaptors are not, and
 * reports must be byte-identical for a given seed. */
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  std::uint64_t next() { return eng(); }

  /* uniform in [0, n), n > 0, by rejection */
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = eng();
    } while (x >= limit);
    return x % n;
  }

  /* uniform in [lo, hi] inclusive */
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool flip() { return (eng() & 1) != 0; }
};

}  // namespace idelek
