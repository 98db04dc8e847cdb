#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "helpers.hpp"
#include "tamm/generate.hpp"
#include "tamm/ops.hpp"
#include "tamm/strassen.hpp"
#include "tamm/verify.hpp"

using namespace tamm;
using tamm_test::fails_with;

namespace {

// Flip one coefficient; every verification mode must notice.
BilinearAlgorithm corrupt(BilinearAlgorithm a) {
  auto ts = a.U.triples();
  ts[ts.size() / 2].v += Rational(1);
  a.U = SparseMatrix::from_triples(a.U.nrows(), a.U.ncols(), std::move(ts));
  return a;
}

}  // namespace

TEST_CASE("mm tensor support") {
  MMTensor t = mm_tensor(2, 2, 2);
  CHECK(t.support.size() == 8);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j)
      for (uint32_t k = 0; k < 2; ++k) {
        std::array<uint32_t, 3> e = {i * 2 + j, j * 2 + k, k * 2 + i};
        CHECK(std::find(t.support.begin(), t.support.end(), e) != t.support.end());
      }
  MMTensor r = mm_tensor(2, 3, 4);
  CHECK(r.support.size() == 24);
}

TEST_CASE("expand_tensor of strassen is the mm tensor") {
  SparseTensor e = expand_tensor(strassen());
  MMTensor t = mm_tensor(2, 2, 2);
  REQUIRE(e.entries.size() == 8);
  for (size_t i = 0; i < 8; ++i) {
    CHECK(e.entries[i].first == t.support[i]);
    CHECK(e.entries[i].second == Rational(1));
  }
}

TEST_CASE("expansion is invariant under joint row permutation") {
  BilinearAlgorithm s = strassen();
  std::vector<uint32_t> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[0], perm[6]);
  std::swap(perm[2], perm[4]);
  BilinearAlgorithm p = s;
  p.U = s.U.select_rows(perm);
  p.V = s.V.select_rows(perm);
  p.W = s.W.select_rows(perm);
  p.tags.clear();
  SparseTensor a = expand_tensor(s), b = expand_tensor(p);
  CHECK(a.entries == b.entries);
  CHECK(verify_exact(p).ok);
}

TEST_CASE("all verification modes accept valid algorithms") {
  for (const BilinearAlgorithm& a :
       {strassen(), compose(strassen(), strassen()), gen_new25(4), gen_pan(4),
        naive_algorithm(3, 2, 2)}) {
    CAPTURE(a.t());
    CHECK(verify_exact(a).ok);
    CHECK(verify_brent(a).ok);
    CHECK(verify_random(a).ok);
    CHECK(verify_multiply(a).ok);
  }
}

TEST_CASE("all verification modes reject a corrupted algorithm") {
  BilinearAlgorithm bad = corrupt(strassen());
  VerifyReport e = verify_exact(bad);
  CHECK_FALSE(e.ok);
  CHECK_FALSE(e.detail.empty());
  CHECK_FALSE(verify_brent(bad).ok);
  VerifyReport r = verify_random(bad);
  CHECK_FALSE(r.ok);
  CHECK(r.trials == 20);
  CHECK_FALSE(verify_multiply(bad).ok);

  BilinearAlgorithm bad2 = corrupt(gen_new25(6));
  CHECK_FALSE(verify_exact(bad2).ok);
  CHECK_FALSE(verify_random(bad2).ok);
}

TEST_CASE("exact verification respects the term budget") {
  CHECK(fails_with(Errc::budget_exceeded, [] { verify_exact(gen_new25(20), 1000); }));
  try {
    verify_exact(gen_new25(20), 1000);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("randomized") != std::string::npos);
  }
  CHECK(fails_with(Errc::budget_exceeded, [] { verify_brent(gen_new25(20), 1000); }));
}

TEST_CASE("random verification is seeded and reproducible") {
  BilinearAlgorithm a = gen_new25(6);
  VerifyReport r1 = verify_random(a, 20, kDefaultPrime, 1);
  VerifyReport r2 = verify_random(a, 20, kDefaultPrime, 1);
  CHECK(r1.ok);
  CHECK(r1.mode == r2.mode);
  CHECK(r1.prime == r2.prime);
  CHECK(r1.trials == r2.trials);
  CHECK(r1.seed == r2.seed);
  CHECK(r1.detail == r2.detail);
  CHECK(verify_random(a, 5, 1000003, 99).ok);
  CHECK(r1.prime == kDefaultPrime);
  CHECK(fails_with(Errc::degenerate_parameter, [&] { verify_random(a, 5, 1000004, 1); }));
}

TEST_CASE("random verification covers decomposed algorithms") {
  DecomposedAlgorithm d = gen_new25_decomposed(6);
  VerifyReport r = verify_random(d, 10);
  CHECK(r.ok);
  CHECK(r.trials == 10);
}

TEST_CASE("multiply verification exercises deeper recursion") {
  CHECK(verify_multiply(strassen(), 2, 3).ok);
  CHECK(verify_multiply(gen_new25(2), 2, 2).ok);
}

TEST_CASE("pairwise random check matches the materialized composition") {
  BilinearAlgorithm g = gen_new25(4);
  VerifyReport mat = verify_random(compose(strassen(), g), 8, kDefaultPrime, 5);
  VerifyReport streamed = verify_random_composed(strassen(), g, 8, kDefaultPrime, 5);
  CHECK(mat.ok);
  CHECK(streamed.ok);
  CHECK(streamed.mode == mat.mode);
  CHECK(streamed.prime == mat.prime);
  CHECK(streamed.trials == mat.trials);
  CHECK(streamed.seed == mat.seed);

  BilinearAlgorithm bad = corrupt(g);
  VerifyReport mat_bad = verify_random(compose(strassen(), bad), 20, kDefaultPrime, 5);
  VerifyReport streamed_bad = verify_random_composed(strassen(), bad, 20, kDefaultPrime, 5);
  CHECK_FALSE(mat_bad.ok);
  CHECK_FALSE(streamed_bad.ok);
  CHECK(streamed_bad.detail == mat_bad.detail);

  VerifyReport rect = verify_random_composed(naive_algorithm(2, 3, 4), strassen(), 6);
  CHECK(rect.ok);
}

TEST_CASE("stamp records passing reports only") {
  BilinearAlgorithm a = strassen();
  VerifyReport ok = verify_exact(a);
  stamp(a, ok);
  REQUIRE(a.verified.has_value());
  CHECK(a.verified->mode == "exact");
  CHECK(a.verified->provenance == "verifier");

  VerifyReport bad = verify_exact(corrupt(strassen()));
  BilinearAlgorithm b = strassen();
  CHECK(fails_with(Errc::verification, [&] { stamp(b, bad); }));
  CHECK_FALSE(b.verified.has_value());
}

TEST_CASE("verification agreement across modes") {
  // The modes form a strength hierarchy; they must agree on both good and
  // corrupted inputs for every algorithm small enough to run all of them.
  for (uint32_t n0 : {2u, 4u}) {
    BilinearAlgorithm good = gen_new25(n0);
    CHECK(verify_exact(good).ok);
    CHECK(verify_brent(good).ok);
    CHECK(verify_random(good).ok);
    CHECK(verify_multiply(good).ok);
    BilinearAlgorithm bad = corrupt(good);
    CHECK_FALSE(verify_exact(bad).ok);
    CHECK_FALSE(verify_brent(bad).ok);
    CHECK_FALSE(verify_random(bad).ok);
    CHECK_FALSE(verify_multiply(bad).ok);
  }
}
