#pragma once

#include <cstdint>
#include <random>

namespace tamm {

// Seeded generator with hand-rolled range reduction. mt19937_64 output is
// pinned by the standard; uniform_int_distribution is not, so we avoid it to
// keep files and reports byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, bound), bound > 0, by rejection.
  uint64_t below(uint64_t bound) {
    uint64_t rem = (~uint64_t{0}) % bound;
    uint64_t limit = ~uint64_t{0} - rem;  // multiples of bound fit in [0, limit)
    for (;;) {
      uint64_t x = eng_();
      if (x < limit || rem == bound - 1) return x % bound;
    }
  }

  long long int_in(long long lo, long long hi) {  // inclusive
    return lo + (long long)below((uint64_t)(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tamm
