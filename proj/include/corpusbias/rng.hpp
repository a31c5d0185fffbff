#pragma once

#include <cstdint>
#include <random>

namespace corpusbias {

// Seeded std::mt19937_64 with hand-rolled derived draws. The raw engine
// sequence is pinned by the standard, whereas std::uniform_*_distribution
// output is implementation-defined; deriving bounded ints and unit doubles
// directly from the 64-bit stream keeps every seeded artifact byte-identical
// across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, n). Modulo bias is < n / 2^64, irrelevant for the
  // table sizes and corpus lengths seen here.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // Uniform in [0, 1) with 53-bit resolution.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace corpusbias
