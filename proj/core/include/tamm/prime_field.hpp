#pragma once

#include <cstdint>

#include "tamm/error.hpp"
#include "tamm/rational.hpp"
#include "tamm/rng.hpp"

namespace tamm {

inline constexpr uint64_t kDefaultPrime = (uint64_t{1} << 61) - 1;  // Mersenne prime 2^61-1

bool is_prime_u64(uint64_t n);

// Arithmetic mod an odd prime p < 2^62; products go through __int128.
class PrimeField {
 public:
  explicit PrimeField(uint64_t p) : p_(p) {
    require(p >= 3 && p < (uint64_t{1} << 62), Errc::degenerate_parameter,
            "prime must be odd and below 2^62");
    require(is_prime_u64(p), Errc::degenerate_parameter, "modulus is not prime");
  }

  uint64_t p() const { return p_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return (uint64_t)((unsigned __int128)a * b % p_);
  }
  uint64_t pow(uint64_t a, uint64_t e) const {
    uint64_t acc = 1;
    while (e) {
      if (e & 1) acc = mul(acc, a);
      a = mul(a, a);
      e >>= 1;
    }
    return acc;
  }
  uint64_t inv(uint64_t a) const {
    require(a != 0, Errc::domain, "inverse of zero in prime field");
    return pow(a, p_ - 2);
  }

  // Image of a rational: num * den^-1 mod p; den must be a unit mod p.
  uint64_t project(const Rational& r) const;

  uint64_t sample(Rng& rng) const { return rng.below(p_); }

 private:
  uint64_t p_;
};

}  // namespace tamm
