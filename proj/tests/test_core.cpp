#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "tamm/prime_field.hpp"
#include "tamm/rational.hpp"
#include "tamm/rng.hpp"
#include "tamm/sparse.hpp"

using namespace tamm;
using tamm_test::fails_with;
using cpp_rat = boost::multiprecision::cpp_rational;

namespace {

cpp_rat to_oracle(const Rational& r) {
  return cpp_rat(boost::multiprecision::cpp_int(r.num_string()),
                 boost::multiprecision::cpp_int(r.den_string()));
}

}  // namespace

TEST_CASE("rational construction and canonical form") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(0, 7) == Rational());
  CHECK(Rational(5).is_integer());
  CHECK(Rational(1).is_singleton());
  CHECK(Rational(-1).is_singleton());
  CHECK_FALSE(Rational(2).is_singleton());
  CHECK_FALSE(Rational(1, 2).is_singleton());
  CHECK(Rational(7, 1).num_small() == 7);
  CHECK(Rational(3, 2).den_small() == 2);
  CHECK(fails_with(Errc::domain, [] { Rational(1, 0); }));
}

TEST_CASE("rational arithmetic matches the multiprecision oracle") {
  Rng rng(7);
  std::vector<Rational> pool;
  for (int i = 0; i < 40; ++i)
    pool.emplace_back(rng.int_in(-50, 50), rng.int_in(1, 30));
  // Mix in values that force the big representation.
  pool.push_back(Rational(1000000007).pow(3));
  pool.push_back(Rational(2, 3).pow(45));
  pool.push_back(-Rational(987654321, 1000000007).pow(4));
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = 0; j < pool.size(); j += 3) {
      const Rational &a = pool[i], &b = pool[j];
      CHECK(to_oracle(a + b) == to_oracle(a) + to_oracle(b));
      CHECK(to_oracle(a - b) == to_oracle(a) - to_oracle(b));
      CHECK(to_oracle(a * b) == to_oracle(a) * to_oracle(b));
      if (!b.is_zero()) CHECK(to_oracle(a / b) == to_oracle(a) / to_oracle(b));
      CHECK((a < b) == (to_oracle(a) < to_oracle(b)));
      CHECK((a == b) == (to_oracle(a) == to_oracle(b)));
    }
}

TEST_CASE("rational big values demote when small again") {
  Rational big = Rational(10).pow(30);
  CHECK(big.is_big());
  Rational back = big / Rational(10).pow(29);
  CHECK_FALSE(back.is_big());
  CHECK(back == Rational(10));
  CHECK(big - big == Rational());
}

TEST_CASE("rational pow and inverse") {
  CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
  CHECK(Rational(2, 3).pow(0) == Rational(1));
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational(-2).pow(3) == Rational(-8));
  CHECK(Rational(5, 7).inverse() == Rational(7, 5));
  CHECK(fails_with(Errc::domain, [] { Rational().inverse(); }));
}

TEST_CASE("rational parsing") {
  CHECK(Rational::from_string("3") == Rational(3));
  CHECK(Rational::from_string("-3/6") == Rational(-1, 2));
  CHECK(Rational::from_string("4/2") == Rational(2));
  CHECK(Rational::from_string("123456789123456789123456789/3") ==
        Rational::from_string("41152263041152263041152263"));
  for (const char* bad : {"", "/", "1/", "/2", "1/0", "1.5", "1+2i", "0x10", "2 ", "a", "+4/2"})
    CHECK_MESSAGE(fails_with(Errc::parse, [&] { Rational::from_string(bad); }), bad);
}

TEST_CASE("rational to_string round trips") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Rational r(rng.int_in(-1000, 1000), rng.int_in(1, 500));
    CHECK(Rational::from_string(r.to_string()) == r);
  }
  Rational big = Rational(3, 7).pow(40);
  CHECK(Rational::from_string(big.to_string()) == big);
  CHECK(Rational(-1, 2).to_string() == "-1/2");
  CHECK(Rational(4).to_string() == "4");
  std::ostringstream os;
  os << Rational(5, 3);
  CHECK(os.str() == "5/3");
}

TEST_CASE("sparse from_triples normalizes") {
  std::vector<Triple> ts = {{1, 2, Rational(3)}, {0, 1, Rational(2)}, {1, 0, Rational(1)},
                            {1, 2, Rational(-3)}, {0, 0, Rational(0)}};
  SparseMatrix m = SparseMatrix::from_triples(2, 3, ts);
  CHECK(m.nnz() == 2);  // duplicate at (1,2) cancels, zero dropped
  auto r0 = m.row(0);
  REQUIRE(r0.size() == 1);
  CHECK(r0.cols[0] == 1);
  CHECK(r0.vals[0] == Rational(2));
  CHECK(fails_with(Errc::parse, [&] {
    SparseMatrix::from_triples(2, 3, {{0, 0, Rational(1)}, {0, 0, Rational(1)}}, true);
  }));
  CHECK(fails_with(Errc::dimension_mismatch,
                   [&] { SparseMatrix::from_triples(2, 3, {{2, 0, Rational(1)}}); }));
  CHECK(fails_with(Errc::dimension_mismatch,
                   [&] { SparseMatrix::from_triples(2, 3, {{0, 3, Rational(1)}}); }));
}

TEST_CASE("sparse round trips through dense and triples") {
  Rng rng(5);
  QMatrix d = tamm_test::random_qmatrix(rng, 6, 5);
  SparseMatrix m = SparseMatrix::from_dense(d);
  CHECK(m.to_dense().a == d.a);
  SparseMatrix again = SparseMatrix::from_triples(6, 5, m.triples());
  CHECK(again == m);
  m.validate();
}

TEST_CASE("sparse matmul, transpose, kron against dense") {
  Rng rng(9);
  QMatrix da = tamm_test::random_qmatrix(rng, 4, 6);
  QMatrix db = tamm_test::random_qmatrix(rng, 6, 3);
  SparseMatrix a = SparseMatrix::from_dense(da);
  SparseMatrix b = SparseMatrix::from_dense(db);
  CHECK(a.matmul(b).to_dense().a == tamm_test::qmul(da, db).a);

  QMatrix dat(6, 4);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 6; ++j) dat.at(j, i) = da.at(i, j);
  CHECK(a.transpose().to_dense().a == dat.a);

  SparseMatrix k = a.kron(b);
  CHECK(k.nrows() == 24);
  CHECK(k.ncols() == 18);
  QMatrix dk = k.to_dense();
  for (size_t i = 0; i < 24; ++i)
    for (size_t j = 0; j < 18; ++j)
      CHECK(dk.at(i, j) == da.at(i / 6, j / 3) * db.at(i % 6, j % 3));

  CHECK(fails_with(Errc::dimension_mismatch, [&] { b.matmul(a); }));
}

TEST_CASE("sparse apply in both directions") {
  Rng rng(13);
  QMatrix da = tamm_test::random_qmatrix(rng, 5, 7);
  SparseMatrix a = SparseMatrix::from_dense(da);
  std::vector<Rational> x;
  for (int i = 0; i < 7; ++i) x.emplace_back(rng.int_in(-3, 3));
  std::vector<Rational> y = a.apply(x);
  REQUIRE(y.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    Rational want;
    for (size_t j = 0; j < 7; ++j) want += da.at(i, j) * x[j];
    CHECK(y[i] == want);
  }
  std::vector<Rational> z(5);
  for (auto& v : z) v = Rational(rng.int_in(-3, 3));
  std::vector<Rational> w = a.apply_transposed(z);
  REQUIRE(w.size() == 7);
  for (size_t j = 0; j < 7; ++j) {
    Rational want;
    for (size_t i = 0; i < 5; ++i) want += da.at(i, j) * z[i];
    CHECK(w[j] == want);
  }
}

TEST_CASE("sparse row utilities") {
  SparseMatrix m = SparseMatrix::from_triples(
      4, 3,
      {{0, 0, Rational(1)}, {0, 2, Rational(-2)}, {1, 0, Rational(1)}, {1, 2, Rational(-2)},
       {2, 1, Rational(5)}, {3, 0, Rational(1)}});
  CHECK(m.row_equal(0, m, 1));
  CHECK_FALSE(m.row_equal(0, m, 2));
  CHECK_FALSE(m.row_equal(0, m, 3));
  CHECK(m.row_hash(0) == m.row_hash(1));

  SparseMatrix sel = m.select_rows({2, 0});
  CHECK(sel.nrows() == 2);
  CHECK(sel.row(0).cols[0] == 1);
  CHECK(sel.row(1).cols[0] == 0);

  CHECK(m.nns() == 3);
}

TEST_CASE("sparse nns counts non-singleton entries") {
  SparseMatrix m = SparseMatrix::from_triples(
      1, 4, {{0, 0, Rational(1)}, {0, 1, Rational(-1)}, {0, 2, Rational(2)}, {0, 3, Rational(1, 2)}});
  CHECK(m.nnz() == 4);
  CHECK(m.nns() == 2);
}

TEST_CASE("sparse builder") {
  SparseMatrix::Builder b(4);
  b.add(2, Rational(1));
  b.add(0, Rational(2));
  b.add(2, Rational(-1));  // cancels the first entry
  b.finish_row();
  SparseMatrix src = SparseMatrix::from_triples(1, 4, {{0, 1, Rational(3)}, {0, 3, Rational(1)}});
  b.append_row(src.row(0), Rational(2));
  b.finish_row();
  SparseMatrix m = b.take();
  CHECK(m.nrows() == 2);
  CHECK(m.ncols() == 4);
  CHECK(m.to_dense().at(0, 0) == Rational(2));
  CHECK(m.to_dense().at(0, 2) == Rational());
  CHECK(m.to_dense().at(1, 1) == Rational(6));
  CHECK(m.to_dense().at(1, 3) == Rational(2));
}

TEST_CASE("prime field arithmetic") {
  PrimeField f(1000003);
  CHECK(f.p() == 1000003);
  CHECK(f.add(1000000, 5) == 2);
  CHECK(f.sub(2, 5) == 1000000);
  CHECK(f.neg(1) == 1000002);
  CHECK(f.mul(999999, 999999) == (uint64_t)((__int128)999999 * 999999 % 1000003));
  CHECK(f.pow(3, 1000002) == 1);  // Fermat
  for (uint64_t x : {1ull, 2ull, 999999ull, 123456ull}) CHECK(f.mul(x, f.inv(x)) == 1);
  CHECK(fails_with(Errc::degenerate_parameter, [] { PrimeField(1000004); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { PrimeField(1); }));
  CHECK(fails_with(Errc::degenerate_parameter, [] { PrimeField(2); }));
}

TEST_CASE("prime field default prime is 2^61 - 1") {
  CHECK(kDefaultPrime == (1ull << 61) - 1);
  PrimeField f(kDefaultPrime);
  uint64_t a = 0x123456789abcdefull, b = 0xfedcba987654321ull;
  CHECK(f.mul(a, b) == (uint64_t)((unsigned __int128)a * b % kDefaultPrime));
  CHECK(f.mul(f.inv(a), a) == 1);
}

TEST_CASE("prime field projects rationals") {
  PrimeField f(101);
  CHECK(f.project(Rational(5)) == 5);
  CHECK(f.project(Rational(-1)) == 100);
  CHECK(f.mul(f.project(Rational(2, 3)), 3) == 2);
  CHECK(fails_with(Errc::domain, [&] { f.project(Rational(1, 101)); }));
}

TEST_CASE("rng is deterministic and in range") {
  Rng a(42), b(42), c(43);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.next_u64();
    same = same && x == b.next_u64();
    diff = diff || x != c.next_u64();
  }
  CHECK(same);
  CHECK(diff);
  Rng r(1);
  std::set<uint64_t> seen;
  for (int i = 0; i < 200; ++i) {
    uint64_t v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  for (int i = 0; i < 50; ++i) {
    long long v = r.int_in(-2, 2);
    CHECK(v >= -2);
    CHECK(v <= 2);
  }
}
