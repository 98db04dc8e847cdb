#include "tamm/rational.hpp"

#include <bit>
#include <ostream>

#include <boost/multiprecision/cpp_int.hpp>

namespace tamm {

using boost::multiprecision::cpp_int;

namespace detail {
struct BigRat {
  cpp_int n;
  cpp_int d;  // d > 0, gcd(|n|, d) = 1, and (n, d) does not fit inline
};
}  // namespace detail

using detail::BigRat;

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs128(i128 v) { return v < 0 ? (u128)(-v) : (u128)v; }

u128 gcd_u128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr long long kMaxSmall = INT64_MAX;

void load_cpp(const Rational& r, const BigRat* big, cpp_int& n, cpp_int& d) {
  if (big != nullptr) {
    n = big->n;
    d = big->d;
  } else {
    n = r.num_small();
    d = r.den_small();
  }
}

}  // namespace

BigRat* Rational::big() const { return std::bit_cast<BigRat*>(num_); }

void Rational::set_big(BigRat* b) {
  num_ = std::bit_cast<long long>(b);
  den_ = 0;
}

void Rational::destroy_big() { delete big(); }

Rational::Rational(long long n, long long d) : num_(0), den_(1) {
  require(d != 0, Errc::domain, "rational with zero denominator");
  *this = normalize128((i128)n, (i128)d);
}

Rational::Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
  if (o.is_big()) set_big(new BigRat(*o.big()));
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  if (is_big()) destroy_big();
  num_ = o.num_;
  den_ = o.den_;
  if (o.is_big()) set_big(new BigRat(*o.big()));
  return *this;
}

Rational& Rational::operator=(Rational&& o) noexcept {
  if (this == &o) return *this;
  if (is_big()) destroy_big();
  num_ = o.num_;
  den_ = o.den_;
  o.num_ = 0;
  o.den_ = 1;
  return *this;
}

Rational Rational::normalize128(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return Rational();
  u128 un = uabs128(n);
  u128 ud = (u128)d;
  u128 g = gcd_u128(un, ud);
  un /= g;
  ud /= g;
  if (un <= (u128)kMaxSmall && ud <= (u128)kMaxSmall) {
    Rational r;
    r.num_ = n < 0 ? -(long long)un : (long long)un;
    r.den_ = (long long)ud;
    return r;
  }
  BigRat b;
  b.n = cpp_int(un);
  if (n < 0) b.n = -b.n;
  b.d = cpp_int(ud);
  Rational r;
  r.set_big(new BigRat(std::move(b)));
  return r;
}

Rational Rational::from_big(BigRat&& b) {
  require(b.d != 0, Errc::domain, "rational with zero denominator");
  if (b.d < 0) {
    b.n = -b.n;
    b.d = -b.d;
  }
  if (b.n == 0) return Rational();
  cpp_int g = gcd(boost::multiprecision::abs(b.n), b.d);
  if (g > 1) {
    b.n /= g;
    b.d /= g;
  }
  if (b.n >= -kMaxSmall && b.n <= kMaxSmall && b.d <= kMaxSmall) {
    Rational r;
    r.num_ = b.n.convert_to<long long>();
    r.den_ = b.d.convert_to<long long>();
    return r;
  }
  Rational r;
  r.set_big(new BigRat(std::move(b)));
  return r;
}

Rational add_big(const Rational& a, const Rational& b, bool subtract) {
  cpp_int an, ad, bn, bd;
  load_cpp(a, a.is_big() ? a.big() : nullptr, an, ad);
  load_cpp(b, b.is_big() ? b.big() : nullptr, bn, bd);
  if (subtract) bn = -bn;
  BigRat out;
  out.n = an * bd + bn * ad;
  out.d = ad * bd;
  return Rational::from_big(std::move(out));
}

Rational mul_big(const Rational& a, const Rational& b, bool divide) {
  cpp_int an, ad, bn, bd;
  load_cpp(a, a.is_big() ? a.big() : nullptr, an, ad);
  load_cpp(b, b.is_big() ? b.big() : nullptr, bn, bd);
  if (divide) {
    require(bn != 0, Errc::domain, "division by zero rational");
    std::swap(bn, bd);
  }
  BigRat out;
  out.n = an * bn;
  out.d = ad * bd;
  return Rational::from_big(std::move(out));
}

Rational& Rational::operator+=(const Rational& o) {
  if (!is_big() && !o.is_big()) {
    i128 n = (i128)num_ * o.den_ + (i128)o.num_ * den_;
    i128 d = (i128)den_ * o.den_;
    *this = normalize128(n, d);
  } else {
    *this = add_big(*this, o, false);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!is_big() && !o.is_big()) {
    i128 n = (i128)num_ * o.den_ - (i128)o.num_ * den_;
    i128 d = (i128)den_ * o.den_;
    *this = normalize128(n, d);
  } else {
    *this = add_big(*this, o, true);
  }
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!is_big() && !o.is_big()) {
    i128 n = (i128)num_ * o.num_;
    i128 d = (i128)den_ * o.den_;
    *this = normalize128(n, d);
  } else {
    *this = mul_big(*this, o, false);
  }
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  require(!o.is_zero(), Errc::domain, "division by zero rational");
  if (!is_big() && !o.is_big()) {
    i128 n = (i128)num_ * o.den_;
    i128 d = (i128)den_ * o.num_;
    *this = normalize128(n, d);
  } else {
    *this = mul_big(*this, o, true);
  }
  return *this;
}

Rational Rational::operator-() const {
  if (!is_big()) {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  BigRat b(*big());
  b.n = -b.n;
  Rational r;
  r.set_big(new BigRat(std::move(b)));
  return r;
}

bool Rational::operator==(const Rational& o) const {
  if (is_big() != o.is_big()) return false;  // big values never fit inline
  if (!is_big()) return num_ == o.num_ && den_ == o.den_;
  return big()->n == o.big()->n && big()->d == o.big()->d;
}

bool Rational::operator<(const Rational& o) const {
  if (!is_big() && !o.is_big()) {
    return (i128)num_ * o.den_ < (i128)o.num_ * den_;
  }
  cpp_int an, ad, bn, bd;
  load_cpp(*this, is_big() ? big() : nullptr, an, ad);
  load_cpp(o, o.is_big() ? o.big() : nullptr, bn, bd);
  return an * bd < bn * ad;
}

int Rational::sign() const {
  if (!is_big()) return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  return big()->n > 0 ? 1 : -1;
}

bool Rational::is_integer() const { return is_big() ? big()->d == 1 : den_ == 1; }

Rational Rational::inverse() const {
  require(!is_zero(), Errc::domain, "inverse of zero rational");
  if (!is_big()) return normalize128((i128)den_, (i128)num_);
  BigRat b;
  b.n = big()->d;
  b.d = big()->n;
  return from_big(std::move(b));
}

Rational Rational::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  Rational acc(1);
  Rational base(*this);
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

double Rational::to_double() const {
  if (!is_big()) return (double)num_ / (double)den_;
  return big()->n.convert_to<double>() / big()->d.convert_to<double>();
}

std::string Rational::to_string() const {
  if (!is_big()) {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }
  std::string s = big()->n.str();
  if (big()->d != 1) {
    s += '/';
    s += big()->d.str();
  }
  return s;
}

std::string Rational::num_string() const {
  return is_big() ? big()->n.str() : std::to_string(num_);
}

std::string Rational::den_string() const {
  return is_big() ? big()->d.str() : std::to_string(den_);
}

Rational Rational::from_string(std::string_view s) {
  auto bad = [&]() { fail(Errc::parse, "malformed rational '" + std::string(s) + "'"); };
  if (s.empty()) bad();
  size_t slash = s.find('/');
  std::string_view np = s.substr(0, slash);
  std::string_view dp = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  auto check_int = [&](std::string_view v) {
    if (v.empty()) bad();
    size_t i = v[0] == '-' ? 1 : 0;
    if (i == v.size()) bad();
    for (; i < v.size(); ++i) {
      if (v[i] < '0' || v[i] > '9') bad();
    }
  };
  check_int(np);
  check_int(dp);
  BigRat b;
  try {
    b.n = cpp_int(std::string(np));
    b.d = cpp_int(std::string(dp));
  } catch (const std::exception&) {
    bad();
  }
  if (b.d == 0) fail(Errc::parse, "rational with zero denominator '" + std::string(s) + "'");
  return from_big(std::move(b));
}

size_t Rational::hash() const {
  if (!is_big()) {
    uint64_t x = (uint64_t)num_ * 0x9e3779b97f4a7c15ull;
    x ^= (uint64_t)den_ + 0x9e3779b97f4a7c15ull + (x << 6) + (x >> 2);
    return (size_t)(x * 0xbf58476d1ce4e5b9ull);
  }
  return std::hash<std::string>()(to_string());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace tamm
