#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tamm/analysis.hpp"
#include "tamm/generate.hpp"
#include "tamm/ops.hpp"
#include "tamm/verify.hpp"

using namespace tamm;
using tamm_test::fails_with;

TEST_CASE("aggregation context") {
  AggregationContext ctx = make_context(6);
  CHECK(ctx.n0 == 6);
  CHECK(ctx.d == 4);
  CHECK(ctx.gamma == Rational(-5, 4));  // 1 - 9/d
  CHECK(ctx.s_dot1.size() == 4);
  CHECK(ctx.s_tilde1.size() == 4);
  CHECK(ctx.s_tilde.size() == 12);  // d^2 - d ordered pairs
  CHECK(ctx.bar(1) == 5);
  CHECK(ctx.bar(5) == 1);
  CHECK(ctx.coord(2, 3) == 19);

  CHECK(make_context(2).gamma == Rational(-7, 2));
  CHECK(fails_with(Errc::degenerate_parameter, [] { make_context(16); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { make_context(3); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { make_context(0); }));
}

TEST_CASE("phi transform cancels quadrant sums implicitly") {
  for (uint32_t n0 : {4u, 6u, 10u}) {
    CAPTURE(n0);
    uint32_t d = n0 / 2 + 1;
    PhiTransform pt = build_phi(n0);
    CHECK(pt.L.rows == d);
    CHECK(pt.L.cols == n0 / 2);
    CHECK(pt.R.rows == n0 / 2);
    CHECK(pt.R.cols == d);
    CHECK(pt.phi.nrows() == 4 * d * d);
    CHECK(pt.phi.ncols() == n0 * n0);
    pt.phi.validate();

    Rng rng(n0);
    QMatrix A = tamm_test::random_qmatrix(rng, n0, n0, -5, 5);
    auto y = pt.phi.apply(vectorize(A, n0, n0, 1));
    // Every row and column of every d x d quadrant of the transformed
    // operand sums to zero; the cross terms those sums multiply vanish
    // without being computed.
    for (uint32_t qi = 0; qi < 2; ++qi)
      for (uint32_t qj = 0; qj < 2; ++qj) {
        for (uint32_t r = 0; r < d; ++r) {
          Rational s;
          for (uint32_t c = 0; c < d; ++c) s += y[(qi * d + r) * 2 * d + qj * d + c];
          CHECK(s.is_zero());
        }
        for (uint32_t c = 0; c < d; ++c) {
          Rational s;
          for (uint32_t r = 0; r < d; ++r) s += y[(qi * d + r) * 2 * d + qj * d + c];
          CHECK(s.is_zero());
        }
      }
  }
}

TEST_CASE("phi stats at n0 = 20") {
  PhiTransform pt = build_phi(20);
  CHECK(pt.phi.nrows() == 484);
  CHECK(pt.phi.ncols() == 400);
  CHECK(pt.phi.nnz() == 8800);
  CHECK(pt.phi.nns() == 8800);
}

TEST_CASE("generated algorithms are exact at small bases") {
  for (uint32_t n0 : {2u, 4u, 6u, 8u}) {
    CAPTURE(n0);
    BilinearAlgorithm nw = gen_new25(n0);
    CHECK(nw.m == n0);
    CHECK(nw.t() == t_new(n0));
    CHECK(verify_exact(nw).ok);
    BilinearAlgorithm pn = gen_pan(n0);
    CHECK(pn.t() == t_pan(n0));
    CHECK(verify_exact(pn).ok);
  }
}

TEST_CASE("multiplication counts match the closed forms") {
  for (uint32_t n0 = 2; n0 <= 24; n0 += 2) {
    if (n0 == 16) continue;
    CAPTURE(n0);
    CHECK(gen_new25(n0).t() == t_new(n0));
    CHECK(gen_pan(n0).t() == t_pan(n0));
    CHECK(gen_new25_decomposed(n0).t() == t_new(n0));
  }
}

TEST_CASE("decomposed structure at n0 = 20 matches the cost table") {
  DecomposedAlgorithm dec = gen_new25_decomposed(20);
  CHECK(dec.n0 == 20);
  CHECK(dec.s0() == 484);
  CHECK(dec.t() == 4378);
  AlgorithmStats st = stats(dec);
  CHECK(st.u.nnz == 12089);
  CHECK(st.u.nns == 44);
  CHECK(st.v.nnz == 12166);
  CHECK(st.v.nns == 154);
  CHECK(st.w.nnz == 12133);
  CHECK(st.w.nns == 1540);
  dec.validate();
}

TEST_CASE("operand sparsity follows the d-closed-forms") {
  for (uint32_t n0 : {20u, 30u, 44u}) {
    CAPTURE(n0);
    uint64_t d = n0 / 2 + 1;
    AlgorithmStats st = stats(gen_new25_decomposed(n0));
    CHECK(st.u.nns == 4 * d);
    CHECK(st.v.nns == 14 * d);
    CHECK(st.w.nns == 12 * d * d + 8 * d);
    CHECK(st.u.nnz == 8 * d * d * d + 12 * d * d - d);
    CHECK(st.v.nnz == st.u.nnz + 7 * d);
    CHECK(st.w.nnz == st.u.nnz + 4 * d);
  }
}

TEST_CASE("trace cells expose the replaceable blocks") {
  GeneratedAlgorithm g = gen_new25_cells(6);
  uint32_t d = 4;
  CHECK(g.cells.size() == d * d - d);
  for (const TraceCell& c : g.cells) {
    CHECK(c.local.t() == 7);
    CHECK(c.EA.nrows() == 4);
    CHECK(c.EA.ncols() == g.dec.s0());
    CHECK(c.EB.nrows() == 4);
    CHECK(c.EC.nrows() == 4);
    for (uint32_t r = 0; r < 4; ++r) {
      CHECK(c.EA.row(r).size() == 1);
      CHECK(c.EB.row(r).size() == 1);
      CHECK(c.EC.row(r).size() == 1);
    }
    CHECK(c.row0 + 7 <= g.dec.t());
    CHECK(c.cell[0] != c.cell[1]);
  }
}

TEST_CASE("tags partition the generated rows") {
  DecomposedAlgorithm dec = gen_new25_decomposed(6);
  REQUIRE(dec.tags.size() == dec.t());
  size_t agg = 0, corr = 0, cancel = 0;
  for (const RowTag& tag : dec.tags) {
    if (std::holds_alternative<AggTag>(tag)) ++agg;
    if (std::holds_alternative<CorrectionTag>(tag)) ++corr;
    if (std::holds_alternative<CancelTag>(tag)) ++cancel;
  }
  CHECK(agg + corr + cancel == dec.t());
  CHECK(cancel == 7 * 12);  // seven rows per off-diagonal cell
  CHECK(agg > 0);
  CHECK(corr > 0);
}

TEST_CASE("kin pairs count d on the unmerged precursor") {
  for (uint32_t n0 : {6u, 8u, 10u}) {
    CAPTURE(n0);
    BilinearAlgorithm pan = gen_pan(n0);
    auto pairs = find_kin_pairs(pan);
    CHECK(pairs.size() == n0 / 2 + 1);
    BilinearAlgorithm merged = merge_kin(pan, pairs);
    CHECK(merged.t() == t_new(n0));
    CHECK(verify_random(merged, 10).ok);
  }
}

TEST_CASE("mid-size generation verifies modularly") {
  CHECK(verify_random(gen_new25(14), 10).ok);
  CHECK(verify_random(gen_pan(14), 10).ok);
  CHECK(verify_random(gen_new25_decomposed(14), 10).ok);
}

TEST_CASE("degenerate parameters are rejected") {
  CHECK(fails_with(Errc::degenerate_parameter, [] { gen_new25(16); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { gen_pan(16); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { gen_new25(7); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { gen_new25(0); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { gen_new25_decomposed(16); }));
}
