#include "tamm/analysis.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "tamm/error.hpp"

namespace tamm {
namespace {

void check_base(uint32_t n0) {
  require(n0 >= 2 && n0 % 2 == 0, Errc::degenerate_parameter,
          "base dimension must be even and >= 2");
  require(n0 != 16, Errc::degenerate_parameter, "base dimension 16 is degenerate");
}

uint64_t to_count(const Rational& r, const char* what) {
  require(r.is_integer() && !r.is_big() && r.num_small() > 0, Errc::internal, what);
  return static_cast<uint64_t>(r.num_small());
}

std::pair<uint64_t, uint64_t> family_entry(Family family, uint32_t m0) {
  if (family == Family::new25) return {m0, t_new(m0)};
  return {static_cast<uint64_t>(m0) * m0, new25b_rank(m0)};
}

// q * (a^l - b^l) / (a - b), continued as q*l*a^(l-1) when a == b.
Rational geometric_term(long long q, long long a, long long b, uint32_t l) {
  if (q == 0 || l == 0) return Rational(0);
  if (a == b) return Rational(q) * Rational(l) * Rational(a).pow(l - 1);
  return Rational(q) * (Rational(a).pow(l) - Rational(b).pow(l)) / Rational(a - b);
}

}  // namespace

MatrixStats matrix_stats(const SparseMatrix& m) {
  return {m.nrows(), m.ncols(), m.nnz(), m.nns()};
}

AlgorithmStats stats(const BilinearAlgorithm& alg) {
  return {matrix_stats(alg.U), matrix_stats(alg.V), matrix_stats(alg.W), std::nullopt};
}

AlgorithmStats stats(const DecomposedAlgorithm& alg) {
  return {matrix_stats(alg.U_phi), matrix_stats(alg.V_phi), matrix_stats(alg.W_phi),
          matrix_stats(alg.phi)};
}

uint64_t t_pan(uint32_t n0) {
  check_base(n0);
  const Rational x{static_cast<long long>(n0)};
  return to_count(x * x * x / Rational(3) + Rational(15, 4) * x * x + Rational(32, 3) * x +
                      Rational(9),
                  "multiplication count must be a positive integer");
}

uint64_t t_new(uint32_t n0) {
  check_base(n0);
  const Rational x{static_cast<long long>(n0)};
  return to_count(x * x * x / Rational(3) + Rational(15, 4) * x * x + Rational(61, 6) * x +
                      Rational(8),
                  "multiplication count must be a positive integer");
}

uint64_t new25b_rank(uint32_t m0) {
  const uint64_t t = t_new(m0);
  require(t < (1ull << 32), Errc::domain, "squared rank overflows");
  const uint64_t d = m0 / 2 + 1;
  const uint64_t h = d * d - d;
  return t * t - h * h;
}

double exponent(uint64_t n0, uint64_t t) {
  require(n0 >= 2, Errc::domain, "exponent base must be >= 2");
  require(t >= 1, Errc::domain, "exponent rank must be >= 1");
  return static_cast<double>(std::log(static_cast<long double>(t)) /
                             std::log(static_cast<long double>(n0)));
}

double round_half_even(double x, int places) {
  const long double scale = std::pow(10.0L, places);
  return static_cast<double>(std::rint(static_cast<long double>(x) * scale) / scale);
}

BaseSearchResult optimal_base(Family family) {
  BaseSearchResult best;
  best.exponent = std::numeric_limits<double>::infinity();
  for (uint32_t m0 = 2; m0 < 243; m0 += 2) {
    if (m0 == 16) continue;
    const auto [base, rank] = family_entry(family, m0);
    const double e = exponent(base, rank);
    if (e < best.exponent) best = {base, rank, e, false};
  }
  bool ok = true;
  for (uint32_t m0 = 244; m0 <= 2430 && ok; m0 += 2) {
    const long double t = static_cast<long double>(t_new(m0));
    const long double d = m0 / 2 + 1;
    const long double h = d * d - d;
    const long double rank = family == Family::new25 ? t : t * t - h * h;
    const long double base =
        family == Family::new25 ? m0 : static_cast<long double>(m0) * m0;
    ok = std::log(rank) / std::log(base) > 2.8L;
  }
  best.tail_bound_ok = ok;
  return best;
}

Rational leading_coefficient(const DecomposedAlgorithm& alg) {
  const long long t0 = alg.t();
  const long long s0 = alg.s0();
  require(t0 != s0, Errc::domain, "leading coefficient needs t0 != s0");
  return Rational(stats(alg).q(), t0 - s0) + Rational(1);
}

Rational leading_coefficient(const BilinearAlgorithm& alg) {
  require(alg.m == alg.n && alg.n == alg.p, Errc::domain,
          "leading coefficient needs a square algorithm");
  const long long t0 = alg.t();
  const long long s0 = static_cast<long long>(alg.n) * alg.n;
  require(t0 != s0, Errc::domain, "leading coefficient needs t != n^2");
  return Rational(stats(alg).q(), t0 - s0) + Rational(1);
}

Rational additive_complexity(const DecomposedAlgorithm& alg, uint64_t n) {
  const uint64_t n0 = alg.n0;
  require(n0 >= 2, Errc::domain, "base dimension must be >= 2");
  uint32_t l = 0;
  uint64_t reach = 1;
  while (reach < n) {
    require(reach <= std::numeric_limits<uint64_t>::max() / n0, Errc::domain,
            "n must be a power of the base dimension");
    reach *= n0;
    ++l;
  }
  require(reach == n, Errc::domain, "n must be a power of the base dimension");

  const AlgorithmStats st = stats(alg);
  const long long t0 = alg.t();
  const long long s0 = alg.s0();
  const long long nsq = static_cast<long long>(n0) * n0;
  const long long p = 2 * st.phi->q_by_rows() + st.phi->q_by_cols();
  return Rational(t0).pow(l) + geometric_term(st.q(), t0, s0, l) + geometric_term(p, s0, nsq, l);
}

}  // namespace tamm
