#pragma once

#include <cstddef>
#include <vector>

#include "tamm/error.hpp"
#include "tamm/rational.hpp"

namespace tamm {

// Row-major dense matrix over an arbitrary scalar type.
template <class T>
struct Dense {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<T> a;

  Dense() = default;
  Dense(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Dense(size_t r, size_t c, std::vector<T> data) : rows(r), cols(c), a(std::move(data)) {
    require(a.size() == r * c, Errc::dimension_mismatch, "dense data size mismatch");
  }

  T& at(size_t i, size_t j) { return a[i * cols + j]; }
  const T& at(size_t i, size_t j) const { return a[i * cols + j]; }

  bool operator==(const Dense& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  Dense transposed() const {
    Dense r(cols, rows);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
  }
};

using QMatrix = Dense<Rational>;

inline QMatrix q_identity(size_t n) {
  QMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

// Plain cubic product; the exact oracle everything else is compared against.
template <class T>
Dense<T> naive_multiply(const Dense<T>& A, const Dense<T>& B) {
  require(A.cols == B.rows, Errc::dimension_mismatch, "naive_multiply shape mismatch");
  Dense<T> C(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k) {
      const T& aik = A.at(i, k);
      for (size_t j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
    }
  return C;
}

// Gauss-Jordan inverse; throws Errc::domain when singular.
QMatrix q_inverse(const QMatrix& K);

Rational q_trace_product(const QMatrix& A, const QMatrix& B, const QMatrix& C);

}  // namespace tamm
