#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tamm/algorithm.hpp"
#include "tamm/prime_field.hpp"

namespace tamm {

inline constexpr size_t kDefaultExpandBudget = 100'000'000;

// Support of the <m0,n0,p0> matrix multiplication tensor in row-major
// vectorized coordinates: (i*n0+j, j*p0+k, k*m0+i).
struct MMTensor {
  uint32_t m = 0, n = 0, p = 0;
  std::vector<std::array<uint32_t, 3>> support;  // sorted
};
MMTensor mm_tensor(uint32_t m0, uint32_t n0, uint32_t p0);

// Exact sum_r u_r x v_r x w_r, sorted, zeros dropped.
struct SparseTensor {
  uint32_t du = 0, dv = 0, dw = 0;
  std::vector<std::pair<std::array<uint32_t, 3>, Rational>> entries;
};
SparseTensor expand_tensor(const BilinearAlgorithm& alg, size_t budget = kDefaultExpandBudget);

struct VerifyReport {
  std::string mode;
  bool ok = false;
  std::string detail;  // first violation when !ok
  uint64_t prime = 0;
  int trials = 0;
  uint64_t seed = 0;
};

// Tensor expansion equals the MM tensor, exact arithmetic.
VerifyReport verify_exact(const BilinearAlgorithm& alg, size_t budget = kDefaultExpandBudget);

// All (m0 n0 p0)^2 sextuple equations <u.,v.,w.> = delta delta delta.
VerifyReport verify_brent(const BilinearAlgorithm& alg, size_t budget = kDefaultExpandBudget);

// Polynomial identity testing of tr(ABC) = <U vecA, V vecB, W vecC> over F_p.
VerifyReport verify_random(const BilinearAlgorithm& alg, int trials = 20,
                           uint64_t prime = kDefaultPrime, uint64_t seed = 1);
VerifyReport verify_random(const DecomposedAlgorithm& alg, int trials = 20,
                           uint64_t prime = kDefaultPrime, uint64_t seed = 1);

// The same check applied to compose(left, right), evaluated row pair by row
// pair off the factor matrices. Reports match verify_random on the
// materialized composition bit for bit, but memory stays at the factor size.
VerifyReport verify_random_composed(const BilinearAlgorithm& left, const BilinearAlgorithm& right,
                                    int trials = 20, uint64_t prime = kDefaultPrime,
                                    uint64_t seed = 1);

// Differential execution against the naive product over exact rationals.
VerifyReport verify_multiply(const BilinearAlgorithm& alg, int samples = 3, int levels = 1,
                             uint64_t seed = 1);

// Record a passing report on the algorithm; refuses failed reports.
void stamp(BilinearAlgorithm& alg, const VerifyReport& r);
void stamp(DecomposedAlgorithm& alg, const VerifyReport& r);

}  // namespace tamm
