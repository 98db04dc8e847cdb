#pragma once

#include <utility>
#include <vector>

#include "tamm/algorithm.hpp"
#include "tamm/dense.hpp"

namespace tamm {

// Recursive block-row-major vectorization: at every level the m0 x n0 block
// grid is walked row-major, each block vectorized recursively. levels = 0
// means a 1x1 matrix.
template <class T>
void vectorize_into(const Dense<T>& A, size_t r0, size_t c0, uint32_t m0, uint32_t n0, int level,
                    std::vector<T>& out, size_t pos, size_t span_rows, size_t span_cols) {
  if (level == 0) {
    out[pos] = A.at(r0, c0);
    return;
  }
  size_t sub_r = span_rows / m0;
  size_t sub_c = span_cols / n0;
  size_t chunk = sub_r * sub_c;
  for (uint32_t i = 0; i < m0; ++i)
    for (uint32_t j = 0; j < n0; ++j) {
      vectorize_into(A, r0 + i * sub_r, c0 + j * sub_c, m0, n0, level - 1, out,
                     pos + ((size_t)i * n0 + j) * chunk, sub_r, sub_c);
    }
}

template <class T>
std::vector<T> vectorize(const Dense<T>& A, uint32_t m0, uint32_t n0, int levels) {
  size_t er = 1, ec = 1;
  for (int l = 0; l < levels; ++l) {
    er *= m0;
    ec *= n0;
  }
  require(A.rows == er && A.cols == ec, Errc::dimension_mismatch,
          "matrix shape is not (m0^levels, n0^levels)");
  std::vector<T> out(er * ec);
  vectorize_into(A, 0, 0, m0, n0, levels, out, 0, er, ec);
  return out;
}

template <class T>
void matricize_into(Dense<T>& A, size_t r0, size_t c0, uint32_t m0, uint32_t n0, int level,
                    const std::vector<T>& in, size_t pos, size_t span_rows, size_t span_cols) {
  if (level == 0) {
    A.at(r0, c0) = in[pos];
    return;
  }
  size_t sub_r = span_rows / m0;
  size_t sub_c = span_cols / n0;
  size_t chunk = sub_r * sub_c;
  for (uint32_t i = 0; i < m0; ++i)
    for (uint32_t j = 0; j < n0; ++j) {
      matricize_into(A, r0 + i * sub_r, c0 + j * sub_c, m0, n0, level - 1, in,
                     pos + ((size_t)i * n0 + j) * chunk, sub_r, sub_c);
    }
}

template <class T>
Dense<T> matricize(const std::vector<T>& v, uint32_t m0, uint32_t n0, int levels) {
  size_t er = 1, ec = 1;
  for (int l = 0; l < levels; ++l) {
    er *= m0;
    ec *= n0;
  }
  require(v.size() == er * ec, Errc::dimension_mismatch, "vector length is not (m0*n0)^levels");
  Dense<T> A(er, ec);
  matricize_into(A, 0, 0, m0, n0, levels, v, 0, er, ec);
  return A;
}

// One application of the bilinear map: C = A*B through the t products.
QMatrix apply_bilinear(const BilinearAlgorithm& alg, const QMatrix& A, const QMatrix& B);

// <U vecA, V vecB, W vecC>; equals tr(A B C) when the algorithm is correct.
Rational trilinear_value(const BilinearAlgorithm& alg, const QMatrix& A, const QMatrix& B,
                         const QMatrix& C);

// Cyclic rotation <U,V,W> -> <V,W,U>, dims (m,n,p) -> (n,p,m).
BilinearAlgorithm rotate(const BilinearAlgorithm& alg);

// Kronecker composition: <m1 m2, n1 n2, p1 p2; t1 t2>.
BilinearAlgorithm compose(const BilinearAlgorithm& a, const BilinearAlgorithm& b);

// Composition with a compressed right factor, keeping the compressed form:
// the basis transform acts blockwise and the factor matrices pair up. The
// left factor must be square.
DecomposedAlgorithm compose(const BilinearAlgorithm& a, const DecomposedAlgorithm& b);

// compose(alg, compose(rotate(alg), rotate(rotate(alg)))): cube to a square
// <mnp, mnp, mnp; t^3> algorithm.
BilinearAlgorithm symmetrize(const BilinearAlgorithm& alg);

// Rows i < j are kin when they agree exactly in at least two of U, V, W.
// Greedy first-found matching in canonical row order, pairs only.
std::vector<std::pair<uint32_t, uint32_t>> find_kin_pairs(const BilinearAlgorithm& alg);

// Merge each kin pair: the matrix in which the rows disagree keeps their sum
// on the surviving (smaller-index) row; the other two keep the shared row.
BilinearAlgorithm merge_kin(const BilinearAlgorithm& alg,
                            const std::vector<std::pair<uint32_t, uint32_t>>& pairs);

// Sandwich transform along the middle dimension: U' = U (I_m x K^T),
// V' = V (K^-1 x I_p), W unchanged. K must be invertible n x n.
BilinearAlgorithm degroote_transform(const BilinearAlgorithm& alg, const QMatrix& K);

// Replace one composed 7x7 cell block by an equivalent sub-algorithm on the
// same 16 scaled operand slots. rows[7a+b] must be the composed row of factor
// rows (a, b); phi_left/phi_right are the factor basis transforms. The
// replacement is a verified <4,4,4;t''> algorithm; the block shrinks by
// 49 - t'' rows.
BilinearAlgorithm substitute_subalgorithm(const BilinearAlgorithm& alg,
                                          const std::vector<uint32_t>& rows, const TraceCell& cl,
                                          const TraceCell& cr, const SparseMatrix& phi_left,
                                          const SparseMatrix& phi_right,
                                          const BilinearAlgorithm& replacement);

// The t = m*n*p schoolbook algorithm; handy as a verified rectangular sample.
BilinearAlgorithm naive_algorithm(uint32_t m, uint32_t n, uint32_t p);

}  // namespace tamm
