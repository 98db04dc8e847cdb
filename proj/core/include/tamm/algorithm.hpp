#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tamm/sparse.hpp"

namespace tamm {

// Row provenance tags. Aggregation rows come from the two triple tables
// (barred rows use the mirrored index triple); CorrectionDiag rows are the
// per-diagonal 7-row blocks with slot 0 the kin-merged row; Cancellation rows
// are the 2x2-trace cells, slots 0..6 of the cell's local algorithm; Composed
// rows record the factor row pair of a Kronecker composition.
struct UntaggedTag {
  bool operator==(const UntaggedTag&) const = default;
};
struct AggTag {
  int table;  // 1 or 2
  std::array<int, 3> triple;
  bool barred;
  bool operator==(const AggTag&) const = default;
};
struct CorrectionTag {
  int i;
  int slot;
  bool operator==(const CorrectionTag&) const = default;
};
struct CancelTag {
  std::array<int, 2> cell;
  int slot;
  bool operator==(const CancelTag&) const = default;
};
struct ComposedTag {
  uint32_t left;
  uint32_t right;
  bool operator==(const ComposedTag&) const = default;
};

using RowTag = std::variant<UntaggedTag, AggTag, CorrectionTag, CancelTag, ComposedTag>;

// Verification metadata; only the verifier module stamps it, algebra
// operations propagate it.
struct Verification {
  std::string mode;  // "exact" | "brent" | "random" | "multiply"
  uint64_t prime = 0;
  int trials = 0;
  uint64_t seed = 0;
  std::string provenance;  // e.g. "verifier", "compose", "rotate"
  bool operator==(const Verification&) const = default;
};

// <m,n,p;t> bilinear algorithm in the trilinear convention:
//   tr(A B C) = sum_r (U vecA)_r (V vecB)_r (W vecC)_r
// with A m x n, B n x p, C p x m, row-major vectorization, and the product
// recovered as vec(C'^T) = W^T ((U vecA) o (V vecB)).
struct BilinearAlgorithm {
  uint32_t m = 0, n = 0, p = 0;
  SparseMatrix U, V, W;
  std::vector<RowTag> tags;  // empty or size t
  std::optional<Verification> verified;

  uint32_t t() const { return U.nrows(); }

  void validate() const {
    require(U.ncols() == m * n && V.ncols() == n * p && W.ncols() == p * m,
            Errc::dimension_mismatch, "algorithm matrix widths inconsistent with dims");
    require(U.nrows() == V.nrows() && V.nrows() == W.nrows(), Errc::dimension_mismatch,
            "algorithm matrices disagree on rank");
    require(tags.empty() || tags.size() == U.nrows(), Errc::dimension_mismatch,
            "tag list size mismatch");
    U.validate();
    V.validate();
    W.validate();
  }
};

// Square algorithm factored through a basis transform phi (s0 x n0^2):
// U = U_phi * phi, V = V_phi * phi, W = W_phi * phi.
struct DecomposedAlgorithm {
  uint32_t n0 = 0;
  SparseMatrix phi;
  SparseMatrix U_phi, V_phi, W_phi;
  std::vector<RowTag> tags;
  std::optional<Verification> verified;

  uint32_t s0() const { return phi.nrows(); }
  uint32_t t() const { return U_phi.nrows(); }

  void validate() const {
    require(phi.ncols() == n0 * n0, Errc::dimension_mismatch, "phi width mismatch");
    require(U_phi.ncols() == s0() && V_phi.ncols() == s0() && W_phi.ncols() == s0(),
            Errc::dimension_mismatch, "factored matrix width mismatch");
    require(U_phi.nrows() == V_phi.nrows() && V_phi.nrows() == W_phi.nrows(),
            Errc::dimension_mismatch, "factored matrices disagree on rank");
    phi.validate();
    U_phi.validate();
    V_phi.validate();
    W_phi.validate();
  }

  BilinearAlgorithm expand() const {
    BilinearAlgorithm a;
    a.m = a.n = a.p = n0;
    a.U = U_phi.matmul(phi);
    a.V = V_phi.matmul(phi);
    a.W = W_phi.matmul(phi);
    a.tags = tags;
    a.verified = verified;
    return a;
  }
};

// One 2x2 cancellation cell: the local <2,2,2;7> algorithm plus the
// embeddings that scale and place its operands in transformed coordinates.
// Rows row0..row0+6 of the parent equal (local.U * EA, local.V * EB,
// local.W * EC) row by row.
struct TraceCell {
  std::array<int, 2> cell;
  uint32_t row0 = 0;
  BilinearAlgorithm local;
  SparseMatrix EA, EB, EC;  // 4 x s0
};

}  // namespace tamm
