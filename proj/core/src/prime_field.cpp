#include "tamm/prime_field.hpp"

#include <string>

namespace tamm {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t acc = 1;
  a %= m;
  while (e) {
    if (e & 1) acc = mulmod_u64(acc, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return acc;
}

uint64_t decimal_mod(const std::string& digits, uint64_t m) {
  uint64_t acc = 0;
  size_t i = 0;
  bool neg = false;
  if (!digits.empty() && digits[0] == '-') {
    neg = true;
    i = 1;
  }
  for (; i < digits.size(); ++i) {
    acc = mulmod_u64(acc, 10, m);
    acc = (acc + (uint64_t)(digits[i] - '0')) % m;
  }
  if (neg && acc != 0) acc = m - acc;
  return acc;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin base set for 64-bit integers.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t PrimeField::project(const Rational& r) const {
  uint64_t num, den;
  if (!r.is_big()) {
    long long n = r.num_small();
    num = n >= 0 ? (uint64_t)n % p_ : p_ - ((uint64_t)(-n) % p_);
    if (num == p_) num = 0;
    den = (uint64_t)r.den_small() % p_;
  } else {
    num = decimal_mod(r.num_string(), p_);
    den = decimal_mod(r.den_string(), p_);
  }
  require(den != 0, Errc::domain, "rational denominator vanishes mod p");
  if (num == 0) return 0;
  return mul(num, inv(den));
}

}  // namespace tamm
