#include "tamm/dense.hpp"

namespace tamm {

QMatrix q_inverse(const QMatrix& K) {
  require(K.rows == K.cols, Errc::dimension_mismatch, "inverse of non-square matrix");
  size_t n = K.rows;
  QMatrix a = K;
  QMatrix inv = q_identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a.at(piv, c).is_zero()) ++piv;
    require(piv < n, Errc::domain, "singular matrix");
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) {
        std::swap(a.at(piv, j), a.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    }
    Rational s = a.at(c, c).inverse();
    for (size_t j = 0; j < n; ++j) {
      a.at(c, j) *= s;
      inv.at(c, j) *= s;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a.at(r, c).is_zero()) continue;
      Rational f = a.at(r, c);
      for (size_t j = 0; j < n; ++j) {
        a.at(r, j) -= f * a.at(c, j);
        inv.at(r, j) -= f * inv.at(c, j);
      }
    }
  }
  return inv;
}

Rational q_trace_product(const QMatrix& A, const QMatrix& B, const QMatrix& C) {
  require(A.cols == B.rows && B.cols == C.rows && C.cols == A.rows, Errc::dimension_mismatch,
          "trace product shape mismatch");
  QMatrix AB = naive_multiply(A, B);
  Rational tr;
  for (size_t i = 0; i < AB.rows; ++i)
    for (size_t k = 0; k < C.rows; ++k) tr += AB.at(i, k) * C.at(k, i);
  return tr;
}

}  // namespace tamm
