#ifndef DBK_RNG_HPP
#define DBK_RNG_HPP

#include <cstdint>

namespace dbk {

// SplitMix64 (Steele, Lea, Vigna).  Chosen over std::mt19937_64 because the
// whole pipeline promises bit-identical streams across platforms and standard
// library versions, and because deriving independent child streams from a
// (seed, path) pair is a one-liner.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() { return double(next() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n), n >= 1.  Rejection sampling keeps the
  // distribution exact and the draw sequence deterministic.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  uint64_t state_;
};

// Deterministic combiner used to derive child stream seeds: one SplitMix64
// output step applied to a, with b folded in first.  Distinct (a, b) pairs
// land in distinct streams for all practical purposes.
inline uint64_t mix64(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dbk

#endif  // DBK_RNG_HPP
