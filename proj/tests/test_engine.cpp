#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "tamm/analysis.hpp"
#include "tamm/engine.hpp"
#include "tamm/generate.hpp"
#include "tamm/ops.hpp"
#include "tamm/strassen.hpp"

using namespace tamm;
using tamm_test::fails_with;

namespace {

template <class D>
Dense<typename D::value_type> random_dense(const D& dom, Rng& rng, size_t n) {
  Dense<typename D::value_type> A(n, n);
  for (auto& x : A.a) x = dom.sample(rng);
  return A;
}

}  // namespace

TEST_CASE("strassen recursion equals naive over rationals") {
  RationalDomain dom;
  Rng rng(31);
  for (int levels = 1; levels <= 3; ++levels) {
    size_t n = 1u << levels;
    Dense<Rational> A = random_dense(dom, rng, n), B = random_dense(dom, rng, n);
    Dense<Rational> C = recursive_multiply(dom, strassen(), A, B, levels);
    CHECK(C.a == naive_multiply_domain(dom, A, B).a);
  }
}

TEST_CASE("level one equals apply_bilinear") {
  Rng rng(37);
  RationalDomain dom;
  BilinearAlgorithm n234 = naive_algorithm(2, 3, 4);
  Dense<Rational> A = tamm_test::random_qmatrix(rng, 2, 3);
  Dense<Rational> B = tamm_test::random_qmatrix(rng, 3, 4);
  Dense<Rational> C = recursive_multiply(dom, n234, A, B, 1);
  CHECK(C.a == apply_bilinear(n234, A, B).a);
}

TEST_CASE("rectangular recursion") {
  RationalDomain dom;
  Rng rng(41);
  BilinearAlgorithm alg = naive_algorithm(2, 3, 2);
  Dense<Rational> A = tamm_test::random_qmatrix(rng, 4, 9);
  Dense<Rational> B = tamm_test::random_qmatrix(rng, 9, 4);
  Dense<Rational> C = recursive_multiply(dom, alg, A, B, 2);
  CHECK(C.a == naive_multiply_domain(dom, A, B).a);
}

TEST_CASE("generated base case over a prime field") {
  PrimeDomain dom{PrimeField(1000003)};
  Rng rng(43);
  BilinearAlgorithm alg = gen_new25(6);
  for (int levels = 1; levels <= 2; ++levels) {
    size_t n = 1;
    for (int l = 0; l < levels; ++l) n *= 6;
    Dense<uint64_t> A = random_dense(dom, rng, n), B = random_dense(dom, rng, n);
    Dense<uint64_t> C = recursive_multiply(dom, alg, A, B, levels);
    CHECK(C.a == naive_multiply_domain(dom, A, B).a);
  }
}

TEST_CASE("decomposed and plain execution agree exactly") {
  PrimeDomain dom{PrimeField(kDefaultPrime)};
  Rng rng(47);
  DecomposedAlgorithm dec = gen_new25_decomposed(6);
  BilinearAlgorithm plain = gen_new25(6);
  Dense<uint64_t> A = random_dense(dom, rng, 36), B = random_dense(dom, rng, 36);
  Dense<uint64_t> C1 = recursive_multiply(dom, dec, A, B, 2);
  Dense<uint64_t> C2 = recursive_multiply(dom, plain, A, B, 2);
  Dense<uint64_t> C3 = naive_multiply_domain(dom, A, B);
  CHECK(C1.a == C2.a);
  CHECK(C1.a == C3.a);
}

TEST_CASE("base threshold switches to naive early") {
  RationalDomain dom;
  Rng rng(53);
  Dense<Rational> A = random_dense(dom, rng, 8), B = random_dense(dom, rng, 8);
  Dense<Rational> want = naive_multiply_domain(dom, A, B);
  for (int bt = 0; bt <= 3; ++bt)
    CHECK(recursive_multiply(dom, strassen(), A, B, 3, bt).a == want.a);
}

TEST_CASE("float recursion is near the naive product") {
  DoubleDomain dom;
  Rng rng(59);
  BilinearAlgorithm alg = gen_new25(20);
  Dense<double> A = random_dense(dom, rng, 400), B = random_dense(dom, rng, 400);
  Dense<double> C = recursive_multiply(dom, alg, A, B, 2);
  Dense<double> D = naive_multiply_domain(dom, A, B);
  double num = 0, den = 0;
  for (size_t i = 0; i < C.a.size(); ++i) {
    num += (C.a[i] - D.a[i]) * (C.a[i] - D.a[i]);
    den += D.a[i] * D.a[i];
  }
  CHECK(std::sqrt(num / den) < 1e-6);
}

TEST_CASE("threaded execution is bit-identical to sequential") {
  Rng rng(61);
  DoubleDomain fdom;
  Dense<double> A = random_dense(fdom, rng, 36), B = random_dense(fdom, rng, 36);
  BilinearAlgorithm alg = gen_new25(6);
  Dense<double> seq = recursive_multiply(fdom, alg, A, B, 2, 0, 1);
  Dense<double> par = recursive_multiply(fdom, alg, A, B, 2, 0, 4);
  CHECK(seq.a == par.a);

  PrimeDomain pdom{PrimeField(1000003)};
  Dense<uint64_t> Ai = random_dense(pdom, rng, 36), Bi = random_dense(pdom, rng, 36);
  CHECK(recursive_multiply(pdom, alg, Ai, Bi, 2, 0, 3).a ==
        recursive_multiply(pdom, alg, Ai, Bi, 2, 0, 1).a);

  DecomposedAlgorithm dec = gen_new25_decomposed(6);
  CHECK(recursive_multiply(pdom, dec, Ai, Bi, 2, 0, 3).a ==
        recursive_multiply(pdom, dec, Ai, Bi, 2, 0, 1).a);
}

TEST_CASE("operation counts") {
  CHECK(count_operations(strassen(), 1).multiplications == 7);
  CHECK(count_operations(strassen(), 2).multiplications == 49);
  CHECK(count_operations(strassen(), 3).multiplications == 343);
  CHECK(count_operations(gen_new25(6), 2).multiplications == 276ull * 276);

  // Strassen at one level: 18 linear ops (the textbook 7M + 18A form).
  CHECK(count_operations(strassen(), 1).linear == 18);
}

TEST_CASE("decomposed operation count matches the closed form") {
  for (uint32_t n0 : {6u, 10u}) {
    CAPTURE(n0);
    DecomposedAlgorithm dec = gen_new25_decomposed(n0);
    for (int levels = 1; levels <= 2; ++levels) {
      uint64_t n = 1;
      for (int l = 0; l < levels; ++l) n *= n0;
      OpCount oc = count_operations(dec, levels);
      Rational want = additive_complexity(dec, n);
      CHECK(Rational((long long)(oc.multiplications + oc.linear)) == want);
    }
  }
}

TEST_CASE("engine rejects invalid calls") {
  RationalDomain dom;
  Dense<Rational> A(2, 2), B(2, 2);
  CHECK(fails_with(Errc::dimension_mismatch,
                   [&] { recursive_multiply(dom, strassen(), A, B, 0); }));
  Dense<Rational> bad(3, 2);
  CHECK(fails_with(Errc::dimension_mismatch,
                   [&] { recursive_multiply(dom, strassen(), bad, B, 1); }));
}
