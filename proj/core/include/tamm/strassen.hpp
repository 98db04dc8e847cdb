#pragma once

#include "tamm/ops.hpp"

namespace tamm {

// Strassen's <2,2,2;7> base instance.
BilinearAlgorithm strassen();

// Orbit member with [U']_0 = vec(K) and W' = W, via the sandwich transform
// R = K^T T_U^-T where T_U = M([U]_0). Requires T_U and K invertible.
BilinearAlgorithm with_first_row_U(const BilinearAlgorithm& alg, const QMatrix& K);

// <2,2,2;7> with [U]_0 = vec(K_U) and [V]_0 = vec(K_V): modify U, rotate to
// put V in front, modify again, rotate back.
BilinearAlgorithm with_prescribed_rows(const QMatrix& K_U, const QMatrix& K_V);

}  // namespace tamm
