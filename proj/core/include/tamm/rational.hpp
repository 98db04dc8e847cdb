#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include "tamm/error.hpp"

namespace tamm {

namespace detail {
struct BigRat;  // arbitrary-precision fallback, defined in rational.cpp
}

// Exact rational scalar. Values that fit in int64 numerator/denominator are
// stored inline (16 bytes, no allocation); anything larger is promoted to a
// heap-backed arbitrary-precision pair and demoted back when it fits again.
// Invariant: den > 0, gcd(num, den) = 1, and the inline range excludes
// INT64_MIN so negation never overflows.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) { check_small_range(); }
  Rational(long long n, long long d);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept : num_(o.num_), den_(o.den_) {
    o.num_ = 0;
    o.den_ = 1;
  }
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept;
  ~Rational() {
    if (is_big()) destroy_big();
  }

  // Parses "n" or "n/d" (optionally signed); normalizes. Throws Errc::parse.
  static Rational from_string(std::string_view s);

  bool is_big() const { return den_ == 0; }
  bool is_zero() const { return !is_big() && num_ == 0; }
  bool is_one() const { return !is_big() && num_ == 1 && den_ == 1; }
  bool is_integer() const;
  // True for +1/-1: the coefficients that cost no scalar multiplication.
  bool is_singleton() const { return !is_big() && (num_ == 1 || num_ == -1) && den_ == 1; }

  // Inline accessors; valid only when !is_big().
  long long num_small() const { return num_; }
  long long den_small() const { return den_; }

  int sign() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  bool operator==(const Rational& o) const;
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  Rational inverse() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational pow(long long e) const;

  double to_double() const;
  std::string to_string() const;
  // Decimal string of num and den for hashing/serialization of big values.
  std::string num_string() const;
  std::string den_string() const;

  size_t hash() const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  // den_ == 0 tags the big representation; num_ then holds a BigRat*.
  long long num_;
  long long den_;

  detail::BigRat* big() const;
  void set_big(detail::BigRat* b);
  void destroy_big();
  void check_small_range() {
    if (num_ == INT64_MIN) fail(Errc::internal, "rational inline range exceeded");
  }

  static Rational normalize128(__int128 n, __int128 d);
  static Rational from_big(detail::BigRat&& b);

  friend struct detail::BigRat;
  friend Rational add_big(const Rational&, const Rational&, bool);
  friend Rational mul_big(const Rational&, const Rational&, bool);
  friend int cmp_any(const Rational&, const Rational&);
};

inline Rational operator""_q(unsigned long long n) { return Rational((long long)n); }

}  // namespace tamm

template <>
struct std::hash<tamm::Rational> {
  size_t operator()(const tamm::Rational& r) const { return r.hash(); }
};
