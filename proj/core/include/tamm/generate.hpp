#pragma once

#include <array>
#include <functional>

#include "tamm/algorithm.hpp"
#include "tamm/dense.hpp"

namespace tamm {

// Index bookkeeping for an even base dimension n0 != 16. Indices live in
// [2d) with d = n0/2 + 1; bar flips between the two halves. The index-set
// lists store unbarred-representative blocks first, then barred, both in
// lexicographic order.
struct AggregationContext {
  uint32_t n0 = 0;
  uint32_t d = 0;
  Rational gamma;  // 1 - 9/d

  std::vector<std::array<uint32_t, 3>> s_dot;     // [d]^3 then barred
  std::vector<std::array<uint32_t, 3>> s_dot1;    // (i,i,i)
  std::vector<std::array<uint32_t, 3>> s_hat;     // i<=j<k or k<j<=i, then barred
  std::vector<std::array<uint32_t, 2>> s_tilde;   // i != j, row-major
  std::vector<std::array<uint32_t, 2>> s_tilde1;  // (i,i)

  uint32_t bar(uint32_t x) const { return (x + d) % (2 * d); }
  uint32_t coord(uint32_t x, uint32_t y) const { return x * 2 * d + y; }
};

AggregationContext make_context(uint32_t n0);

// The quadrant transform A* = (I_2 (x) L) A (I_2 (x) R) as an s0 x n0^2
// matrix on row-major vec(A), s0 = (n0+2)^2.
struct PhiTransform {
  QMatrix L;  // d x n0/2
  QMatrix R;  // n0/2 x d
  SparseMatrix phi;
};

PhiTransform build_phi(uint32_t n0);

// A block of tagged rows in s0-space coordinates.
struct RowBlock {
  SparseMatrix U, V, W;
  std::vector<RowTag> tags;
  uint32_t rows() const { return U.nrows(); }
};

// Both aggregation tables in canonical order; the second table runs over the
// full index set or drops the unbarred diagonal triples (the merged reading).
RowBlock aggregation_rows(const AggregationContext& ctx, bool exclude_unbarred_diagonal);

// The literal seven-product correction block for diagonal index i.
RowBlock correction_block(const AggregationContext& ctx, uint32_t i);

using CellChooser = std::function<BilinearAlgorithm(std::array<uint32_t, 2>)>;

struct CellRows {
  RowBlock rows;
  std::vector<TraceCell> cells;
};

// Seven rows per off-diagonal cell: the chooser's <2,2,2;7> pushed through
// the operand embeddings, with the -d and sign pattern folded into E_C.
CellRows cancellation_cells(const AggregationContext& ctx, const CellChooser& chooser,
                            uint32_t base_row);

// The diagonal traces of the un-merged variant, gamma-scaled.
CellRows diagonal_trace_cells(const AggregationContext& ctx, const CellChooser& chooser,
                              uint32_t base_row);

// First-row requirements making a diagonal cell's first product kin to the
// matching aggregation row.
QMatrix diag_K_U(const Rational& gamma);
QMatrix diag_K_V(const Rational& gamma);
BilinearAlgorithm default_diagonal_cell(const Rational& gamma);

BilinearAlgorithm gen_pan(uint32_t n0);
BilinearAlgorithm gen_new25(uint32_t n0);
DecomposedAlgorithm gen_pan_decomposed(uint32_t n0);
DecomposedAlgorithm gen_new25_decomposed(uint32_t n0);

// The compressed form together with its off-diagonal trace cells, for
// base-case substitution.
struct GeneratedAlgorithm {
  DecomposedAlgorithm dec;
  std::vector<TraceCell> cells;
};

GeneratedAlgorithm gen_new25_cells(uint32_t n0);

}  // namespace tamm
