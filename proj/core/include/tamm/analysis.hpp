#pragma once

#include <cstdint>
#include <optional>

#include "tamm/algorithm.hpp"
#include "tamm/rational.hpp"
#include "tamm/sparse.hpp"

namespace tamm {

// Cost-model counts for one linear pass: applying M row-wise costs
// nnz(M) + nns(M) - nrows(M) additions and scalings; applying M transposed
// (the decoding direction) uses ncols instead.
struct MatrixStats {
  uint32_t rows = 0;
  uint32_t cols = 0;
  uint64_t nnz = 0;
  uint64_t nns = 0;

  int64_t q_by_rows() const { return static_cast<int64_t>(nnz + nns) - rows; }
  int64_t q_by_cols() const { return static_cast<int64_t>(nnz + nns) - cols; }
};

MatrixStats matrix_stats(const SparseMatrix& m);

struct AlgorithmStats {
  MatrixStats u, v, w;
  std::optional<MatrixStats> phi;

  int64_t q_u() const { return u.q_by_rows(); }
  int64_t q_v() const { return v.q_by_rows(); }
  int64_t q_w() const { return w.q_by_cols(); }
  int64_t q() const { return q_u() + q_v() + q_w(); }
};

AlgorithmStats stats(const BilinearAlgorithm& alg);
AlgorithmStats stats(const DecomposedAlgorithm& alg);

// Multiplication counts of the two aggregation families. n0 must be even,
// >= 2 and != 16.
uint64_t t_pan(uint32_t n0);
uint64_t t_new(uint32_t n0);

// Rank of the squared family after replacing the seven-multiplication block
// pairs with a 48-multiplication <4,4,4> base case.
uint64_t new25b_rank(uint32_t m0);

double exponent(uint64_t n0, uint64_t t);

// Ties to even, for comparison against printed tables.
double round_half_even(double x, int places);

enum class Family { new25, new25b };

struct BaseSearchResult {
  uint64_t base = 0;
  uint64_t rank = 0;
  double exponent = 0.0;
  // Any base beyond the search range has exponent > 2.8 (the rank exceeds
  // base^3/3); this records the numeric spot check of that bound.
  bool tail_bound_ok = false;
};

// Exhaustive scan over even base dimensions below 243 (excluding 16).
BaseSearchResult optimal_base(Family family);

Rational leading_coefficient(const DecomposedAlgorithm& alg);
Rational leading_coefficient(const BilinearAlgorithm& alg);

// Exact operation count of the decomposed recursion at n = n0^l:
//   t0^l + q*(t0^l - s0^l)/(t0 - s0) + (2 q_phi + q_phiT)*(s0^l - n0^(2l))/(s0 - n0^2)
// with the geometric factors continued as l*a^(l-1) when a denominator is 0.
Rational additive_complexity(const DecomposedAlgorithm& alg, uint64_t n);

}  // namespace tamm
