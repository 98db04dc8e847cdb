#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tamm/dense.hpp"
#include "tamm/error.hpp"
#include "tamm/rational.hpp"

namespace tamm {

struct Triple {
  uint32_t row;
  uint32_t col;
  Rational v;
};

// Row-major CSR with canonical form: strictly increasing columns per row,
// no explicit zeros. Equality and hashing are therefore structural.
class SparseMatrix {
 public:
  SparseMatrix() { rowptr_ = {0}; }
  SparseMatrix(uint32_t nrows, uint32_t ncols)
      : nrows_(nrows), ncols_(ncols), rowptr_(nrows + 1, 0) {}

  static SparseMatrix identity(uint32_t n);
  // reject_duplicates: error out instead of accumulating (file readers).
  static SparseMatrix from_triples(uint32_t nrows, uint32_t ncols, std::vector<Triple> ts,
                                   bool reject_duplicates = false);

  uint32_t nrows() const { return nrows_; }
  uint32_t ncols() const { return ncols_; }
  size_t nnz() const { return col_.size(); }
  size_t nns() const;

  struct RowView {
    std::span<const uint32_t> cols;
    std::span<const Rational> vals;
    size_t size() const { return cols.size(); }
  };
  RowView row(uint32_t r) const {
    size_t b = rowptr_[r], e = rowptr_[r + 1];
    return {std::span(col_).subspan(b, e - b), std::span(val_).subspan(b, e - b)};
  }

  bool operator==(const SparseMatrix& o) const {
    return nrows_ == o.nrows_ && ncols_ == o.ncols_ && rowptr_ == o.rowptr_ && col_ == o.col_ &&
           val_ == o.val_;
  }
  bool row_equal(uint32_t r, const SparseMatrix& o, uint32_t orow) const;
  size_t row_hash(uint32_t r) const;

  SparseMatrix transpose() const;
  SparseMatrix matmul(const SparseMatrix& o) const;
  SparseMatrix kron(const SparseMatrix& o) const;
  // New matrix whose k-th row is row rows[k] of this.
  SparseMatrix select_rows(const std::vector<uint32_t>& rows) const;

  std::vector<Triple> triples() const;
  QMatrix to_dense() const;
  static SparseMatrix from_dense(const QMatrix& d);

  void validate() const;

  std::vector<Rational> apply(std::span<const Rational> x) const;            // this * x
  std::vector<Rational> apply_transposed(std::span<const Rational> x) const;  // this^T * x

  // Streaming construction in row order; duplicate columns within the
  // pending row accumulate, zeros are dropped on finish_row().
  class Builder {
   public:
    explicit Builder(uint32_t ncols) : ncols_(ncols) {}
    void add(uint32_t col, Rational v);
    void finish_row();
    void append_row(const RowView& rv, const Rational& scale);
    SparseMatrix take();

   private:
    uint32_t ncols_;
    uint32_t nrows_ = 0;
    std::vector<std::pair<uint32_t, Rational>> pending_;
    std::vector<size_t> rowptr_{0};
    std::vector<uint32_t> col_;
    std::vector<Rational> val_;
  };

 private:
  uint32_t nrows_ = 0;
  uint32_t ncols_ = 0;
  std::vector<size_t> rowptr_;
  std::vector<uint32_t> col_;
  std::vector<Rational> val_;

  friend class Builder;
};

// Same sparsity projected into F_p for fast repeated modular application.
struct SparseMod {
  uint32_t nrows = 0;
  uint32_t ncols = 0;
  std::vector<size_t> rowptr;
  std::vector<uint32_t> col;
  std::vector<uint64_t> val;

  std::vector<uint64_t> apply(const class PrimeField& f, std::span<const uint64_t> x) const;
};

SparseMod project(const SparseMatrix& m, const class PrimeField& f);

}  // namespace tamm
