#pragma once

#include <utility>

#include "tamm/algorithm.hpp"
#include "tamm/dense.hpp"
#include "tamm/error.hpp"
#include "tamm/rng.hpp"

namespace tamm_test {

template <class F>
bool fails_with(tamm::Errc code, F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const tamm::Error& e) {
    return e.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

inline tamm::QMatrix random_qmatrix(tamm::Rng& rng, size_t rows, size_t cols, long long lo = -4,
                                    long long hi = 4) {
  tamm::QMatrix A(rows, cols);
  for (auto& x : A.a) x = tamm::Rational(rng.int_in(lo, hi));
  return A;
}

inline tamm::QMatrix qmul(const tamm::QMatrix& A, const tamm::QMatrix& B) {
  tamm::QMatrix C(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k)
      for (size_t j = 0; j < B.cols; ++j) C.at(i, j) += A.at(i, k) * B.at(k, j);
  return C;
}

}  // namespace tamm_test
