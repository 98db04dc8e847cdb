#include "tamm/strassen.hpp"

namespace tamm {

namespace {

SparseMatrix rows7x4(const int (&rows)[7][4]) {
  SparseMatrix::Builder b(4);
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 4; ++c)
      if (rows[r][c] != 0) b.add(c, Rational(rows[r][c]));
    b.finish_row();
  }
  return b.take();
}

QMatrix first_row_matricized(const SparseMatrix& M) {
  QMatrix T(2, 2);
  auto rv = M.row(0);
  for (size_t k = 0; k < rv.size(); ++k) T.at(rv.cols[k] / 2, rv.cols[k] % 2) = rv.vals[k];
  return T;
}

}  // namespace

BilinearAlgorithm strassen() {
  static const int u[7][4] = {{1, 0, 0, 1}, {0, 0, 0, 1}, {0, 1, 0, 1}, {1, -1, 0, 0},
                              {1, 0, 1, 0}, {1, 0, 0, 0}, {0, 0, 1, -1}};
  static const int v[7][4] = {{1, 0, 0, 1},  {1, 0, 1, 0}, {0, 0, -1, 1}, {0, 0, 0, 1},
                              {1, -1, 0, 0}, {0, -1, 0, -1}, {1, 0, 0, 0}};
  static const int w[7][4] = {{1, 0, 0, 1},  {-1, 1, 0, 0}, {-1, 0, 0, 0}, {-1, 0, -1, 0},
                              {0, 0, 0, -1}, {0, 0, -1, 1}, {0, 1, 0, 1}};
  BilinearAlgorithm a;
  a.m = a.n = a.p = 2;
  a.U = rows7x4(u);
  a.V = rows7x4(v);
  a.W = rows7x4(w);
  return a;
}

BilinearAlgorithm with_first_row_U(const BilinearAlgorithm& alg, const QMatrix& K) {
  require(alg.m == 2 && alg.n == 2 && alg.p == 2 && alg.t() == 7, Errc::dimension_mismatch,
          "expected a <2,2,2;7> algorithm");
  require(K.rows == 2 && K.cols == 2, Errc::dimension_mismatch, "K must be 2x2");
  QMatrix Tu = first_row_matricized(alg.U);
  QMatrix R = naive_multiply(K.transposed(), q_inverse(Tu).transposed());
  return degroote_transform(alg, R);
}

BilinearAlgorithm with_prescribed_rows(const QMatrix& K_U, const QMatrix& K_V) {
  BilinearAlgorithm a = with_first_row_U(strassen(), K_U);
  a = rotate(with_first_row_U(rotate(a), K_V));
  return rotate(a);
}

}  // namespace tamm
