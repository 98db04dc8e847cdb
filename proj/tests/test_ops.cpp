#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "tamm/generate.hpp"
#include "tamm/ops.hpp"
#include "tamm/strassen.hpp"
#include "tamm/verify.hpp"

using namespace tamm;
using tamm_test::fails_with;
using tamm_test::qmul;
using tamm_test::random_qmatrix;

TEST_CASE("vectorize and matricize invert each other") {
  Rng rng(3);
  QMatrix A = random_qmatrix(rng, 6, 4);
  auto v = vectorize(A, 6, 4, 1);
  CHECK(v.size() == 24);
  CHECK(v[4] == A.at(1, 0));  // plain row-major at one level
  CHECK(matricize<Rational>(v, 6, 4, 1).a == A.a);

  QMatrix B = random_qmatrix(rng, 4, 4);
  auto w = vectorize(B, 2, 2, 2);
  // Two-level block row-major: entry (r, c) lives at block (r/2, c/2),
  // position (r%2, c%2).
  for (size_t r = 0; r < 4; ++r)
    for (size_t c = 0; c < 4; ++c)
      CHECK(w[(r / 2 * 2 + c / 2) * 4 + (r % 2) * 2 + c % 2] == B.at(r, c));
  CHECK(matricize<Rational>(w, 2, 2, 2).a == B.a);

  CHECK(fails_with(Errc::dimension_mismatch, [&] { vectorize(A, 2, 2, 2); }));
  CHECK(fails_with(Errc::dimension_mismatch, [&] { matricize<Rational>(v, 2, 2, 2); }));
}

TEST_CASE("strassen multiplies correctly") {
  BilinearAlgorithm s = strassen();
  CHECK(s.t() == 7);
  CHECK(s.m == 2);
  s.validate();
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    QMatrix A = random_qmatrix(rng, 2, 2), B = random_qmatrix(rng, 2, 2);
    CHECK(apply_bilinear(s, A, B).a == qmul(A, B).a);
  }
}

TEST_CASE("naive algorithm covers rectangular shapes") {
  BilinearAlgorithm n = naive_algorithm(2, 3, 4);
  CHECK(n.t() == 24);
  CHECK(verify_exact(n).ok);
  Rng rng(19);
  QMatrix A = random_qmatrix(rng, 2, 3), B = random_qmatrix(rng, 3, 4);
  CHECK(apply_bilinear(n, A, B).a == qmul(A, B).a);
}

TEST_CASE("trilinear value equals the trace") {
  BilinearAlgorithm s = strassen();
  Rng rng(23);
  for (int i = 0; i < 10; ++i) {
    QMatrix A = random_qmatrix(rng, 2, 2), B = random_qmatrix(rng, 2, 2),
            C = random_qmatrix(rng, 2, 2);
    QMatrix ABC = qmul(qmul(A, B), C);
    CHECK(trilinear_value(s, A, B, C) == ABC.at(0, 0) + ABC.at(1, 1));
  }
}

TEST_CASE("rotate cycles the trilinear roles") {
  BilinearAlgorithm s = strassen();
  BilinearAlgorithm r = rotate(s);
  CHECK(verify_exact(r).ok);
  CHECK(r.U == s.V);
  CHECK(r.V == s.W);
  CHECK(r.W == s.U);
  BilinearAlgorithm r3 = rotate(rotate(r));
  CHECK(r3.U == s.U);
  CHECK(r3.V == s.V);
  CHECK(r3.W == s.W);

  BilinearAlgorithm n = naive_algorithm(2, 3, 4);
  BilinearAlgorithm nr = rotate(n);
  CHECK(nr.m == 3);
  CHECK(nr.n == 4);
  CHECK(nr.p == 2);
  CHECK(verify_exact(nr).ok);
}

TEST_CASE("compose multiplies shapes and ranks") {
  BilinearAlgorithm s = strassen();
  BilinearAlgorithm ss = compose(s, s);
  CHECK(ss.m == 4);
  CHECK(ss.t() == 49);
  CHECK(verify_exact(ss).ok);

  BilinearAlgorithm mixed = compose(s, naive_algorithm(3, 1, 2));
  CHECK(mixed.m == 6);
  CHECK(mixed.n == 2);
  CHECK(mixed.p == 4);
  CHECK(mixed.t() == 42);
  CHECK(verify_exact(mixed).ok);

  // Composition speaks plain row-major vectorization, so the composed
  // algorithm multiplies plain matrices directly.
  Rng rng(29);
  QMatrix A = random_qmatrix(rng, 4, 4), B = random_qmatrix(rng, 4, 4);
  CHECK(apply_bilinear(ss, A, B).a == qmul(A, B).a);
}

TEST_CASE("composition tags record the factor rows") {
  BilinearAlgorithm s = strassen();
  BilinearAlgorithm ss = compose(s, s);
  REQUIRE(ss.tags.size() == 49);
  const auto* tag = std::get_if<ComposedTag>(&ss.tags[8]);
  REQUIRE(tag != nullptr);
  CHECK(tag->left == 1);
  CHECK(tag->right == 1);
}

TEST_CASE("symmetrize is the product of the three rotations") {
  BilinearAlgorithm s = strassen();
  BilinearAlgorithm sym = symmetrize(s);
  CHECK(sym.m == 8);
  CHECK(sym.n == 8);
  CHECK(sym.p == 8);
  CHECK(sym.t() == 343);
  CHECK(verify_exact(sym).ok);

  BilinearAlgorithm n = naive_algorithm(2, 3, 4);
  BilinearAlgorithm nsym = symmetrize(n);
  CHECK(nsym.m == 24);
  CHECK(verify_exact(nsym).ok);
}

TEST_CASE("degroote transform stays in the orbit") {
  BilinearAlgorithm s = strassen();
  QMatrix K(2, 2);
  K.at(0, 0) = Rational(1);
  K.at(0, 1) = Rational(2);
  K.at(1, 0) = Rational(0);
  K.at(1, 1) = Rational(1);
  BilinearAlgorithm g = degroote_transform(s, K);
  CHECK(g.t() == 7);
  CHECK(verify_exact(g).ok);
}

TEST_CASE("prescribed first rows") {
  QMatrix KU(2, 2), KV(2, 2);
  KU.at(0, 0) = Rational(2);
  KU.at(0, 1) = Rational(1);
  KU.at(1, 0) = Rational(1);
  KV.at(0, 0) = Rational(1);
  KV.at(0, 1) = Rational(3);
  KV.at(1, 1) = Rational(1);
  BilinearAlgorithm a = with_prescribed_rows(KU, KV);
  CHECK(verify_exact(a).ok);
  auto u0 = a.U.row(0), v0 = a.V.row(0);
  CHECK(u0.size() == 3);
  CHECK(u0.vals[0] == Rational(2));
  CHECK(v0.size() == 3);
  CHECK(v0.cols[2] == 3);

  BilinearAlgorithm b = with_first_row_U(strassen(), KU);
  CHECK(verify_exact(b).ok);
  CHECK(b.U.row(0).size() == 3);
  CHECK(b.W == strassen().W);

  QMatrix singular(2, 2);
  singular.at(0, 0) = Rational(1);
  CHECK(fails_with(Errc::domain, [&] { with_first_row_U(strassen(), singular); }));
}

TEST_CASE("generator gamma cells verify standalone") {
  AggregationContext ctx = make_context(6);
  BilinearAlgorithm cell = default_diagonal_cell(ctx.gamma);
  CHECK(cell.t() == 7);
  CHECK(verify_exact(cell).ok);
  CHECK(cell.U.row(0).size() == 3);
}

TEST_CASE("kin merging on the unmerged precursor") {
  BilinearAlgorithm pan = gen_pan(6);
  auto pairs = find_kin_pairs(pan);
  CHECK(pairs.size() == 4);  // d = n0/2 + 1
  BilinearAlgorithm merged = merge_kin(pan, pairs);
  CHECK(merged.t() == 276);
  CHECK(verify_exact(merged).ok);

  // Already-merged algorithms have no targeted pairs left.
  CHECK(find_kin_pairs(gen_new25(6)).empty());
  CHECK(find_kin_pairs(strassen()).empty());
}

TEST_CASE("substitute rejects bad replacements") {
  BilinearAlgorithm ss = compose(strassen(), strassen());
  std::vector<uint32_t> rows(49);
  for (uint32_t i = 0; i < 49; ++i) rows[i] = i;
  GeneratedAlgorithm g = gen_new25_cells(2);
  REQUIRE(g.cells.size() == 2);
  BilinearAlgorithm unverified = compose(strassen(), strassen());
  unverified.verified.reset();
  CHECK(fails_with(Errc::verification, [&] {
    substitute_subalgorithm(ss, rows, g.cells[0], g.cells[1], g.dec.phi, g.dec.phi, unverified);
  }));
  BilinearAlgorithm wrong_dims = strassen();
  VerifyReport ok = verify_exact(wrong_dims);
  stamp(wrong_dims, ok);
  CHECK(fails_with(Errc::dimension_mismatch, [&] {
    substitute_subalgorithm(ss, rows, g.cells[0], g.cells[1], g.dec.phi, g.dec.phi, wrong_dims);
  }));
}
