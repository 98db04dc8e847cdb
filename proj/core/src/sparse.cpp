#include "tamm/sparse.hpp"

#include <algorithm>

#include "tamm/prime_field.hpp"

namespace tamm {

SparseMatrix SparseMatrix::identity(uint32_t n) {
  SparseMatrix m(n, n);
  m.col_.resize(n);
  m.val_.assign(n, Rational(1));
  for (uint32_t i = 0; i < n; ++i) {
    m.col_[i] = i;
    m.rowptr_[i + 1] = i + 1;
  }
  return m;
}

SparseMatrix SparseMatrix::from_triples(uint32_t nrows, uint32_t ncols, std::vector<Triple> ts,
                                        bool reject_duplicates) {
  for (const Triple& t : ts) {
    require(t.row < nrows && t.col < ncols, Errc::dimension_mismatch,
            "sparse entry out of range");
  }
  std::stable_sort(ts.begin(), ts.end(), [](const Triple& a, const Triple& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(nrows, ncols);
  size_t i = 0;
  for (uint32_t r = 0; r < nrows; ++r) {
    while (i < ts.size() && ts[i].row == r) {
      uint32_t c = ts[i].col;
      Rational acc = std::move(ts[i].v);
      ++i;
      while (i < ts.size() && ts[i].row == r && ts[i].col == c) {
        require(!reject_duplicates, Errc::parse, "duplicate sparse coordinate");
        acc += ts[i].v;
        ++i;
      }
      if (!acc.is_zero()) {
        m.col_.push_back(c);
        m.val_.push_back(std::move(acc));
      }
    }
    m.rowptr_[r + 1] = m.col_.size();
  }
  return m;
}

size_t SparseMatrix::nns() const {
  size_t k = 0;
  for (const Rational& v : val_)
    if (!v.is_singleton()) ++k;
  return k;
}

bool SparseMatrix::row_equal(uint32_t r, const SparseMatrix& o, uint32_t orow) const {
  RowView a = row(r), b = o.row(orow);
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.cols[i] != b.cols[i] || a.vals[i] != b.vals[i]) return false;
  }
  return true;
}

size_t SparseMatrix::row_hash(uint32_t r) const {
  RowView a = row(r);
  size_t h = 0x9e3779b97f4a7c15ull ^ a.size();
  for (size_t i = 0; i < a.size(); ++i) {
    h ^= a.cols[i] + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= a.vals[i].hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(ncols_, nrows_);
  std::vector<size_t> count(ncols_ + 1, 0);
  for (uint32_t c : col_) ++count[c + 1];
  for (uint32_t c = 0; c < ncols_; ++c) count[c + 1] += count[c];
  t.rowptr_ = count;
  t.col_.resize(col_.size());
  t.val_.resize(val_.size());
  std::vector<size_t> next = t.rowptr_;
  for (uint32_t r = 0; r < nrows_; ++r) {
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) {
      size_t slot = next[col_[i]]++;
      t.col_[slot] = r;
      t.val_[slot] = val_[i];
    }
  }
  return t;
}

SparseMatrix SparseMatrix::matmul(const SparseMatrix& o) const {
  require(ncols_ == o.nrows_, Errc::dimension_mismatch, "sparse matmul shape mismatch");
  SparseMatrix out(nrows_, o.ncols_);
  std::vector<Rational> acc(o.ncols_);
  std::vector<uint32_t> touched;
  std::vector<char> seen(o.ncols_, 0);
  for (uint32_t r = 0; r < nrows_; ++r) {
    touched.clear();
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) {
      RowView rv = o.row(col_[i]);
      const Rational& s = val_[i];
      for (size_t j = 0; j < rv.size(); ++j) {
        uint32_t c = rv.cols[j];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
          acc[c] = s * rv.vals[j];
        } else {
          acc[c] += s * rv.vals[j];
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (uint32_t c : touched) {
      if (!acc[c].is_zero()) {
        out.col_.push_back(c);
        out.val_.push_back(std::move(acc[c]));
      }
      seen[c] = 0;
    }
    out.rowptr_[r + 1] = out.col_.size();
  }
  return out;
}

SparseMatrix SparseMatrix::kron(const SparseMatrix& o) const {
  require((uint64_t)nrows_ * o.nrows_ <= UINT32_MAX && (uint64_t)ncols_ * o.ncols_ <= UINT32_MAX,
          Errc::dimension_mismatch, "kronecker product dimensions overflow");
  SparseMatrix out(nrows_ * o.nrows_, ncols_ * o.ncols_);
  out.col_.reserve(nnz() * o.nnz());
  out.val_.reserve(nnz() * o.nnz());
  for (uint32_t r1 = 0; r1 < nrows_; ++r1) {
    RowView a = row(r1);
    for (uint32_t r2 = 0; r2 < o.nrows_; ++r2) {
      RowView b = o.row(r2);
      for (size_t i = 0; i < a.size(); ++i) {
        Rational s = a.vals[i];
        uint32_t base = a.cols[i] * o.ncols_;
        for (size_t j = 0; j < b.size(); ++j) {
          out.col_.push_back(base + b.cols[j]);
          out.val_.push_back(s * b.vals[j]);
        }
      }
      out.rowptr_[(size_t)r1 * o.nrows_ + r2 + 1] = out.col_.size();
    }
  }
  return out;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<uint32_t>& rows) const {
  SparseMatrix out((uint32_t)rows.size(), ncols_);
  for (size_t k = 0; k < rows.size(); ++k) {
    require(rows[k] < nrows_, Errc::dimension_mismatch, "row selection out of range");
    RowView rv = row(rows[k]);
    for (size_t i = 0; i < rv.size(); ++i) {
      out.col_.push_back(rv.cols[i]);
      out.val_.push_back(rv.vals[i]);
    }
    out.rowptr_[k + 1] = out.col_.size();
  }
  return out;
}

std::vector<Triple> SparseMatrix::triples() const {
  std::vector<Triple> ts;
  ts.reserve(nnz());
  for (uint32_t r = 0; r < nrows_; ++r) {
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) ts.push_back({r, col_[i], val_[i]});
  }
  return ts;
}

QMatrix SparseMatrix::to_dense() const {
  QMatrix d(nrows_, ncols_);
  for (uint32_t r = 0; r < nrows_; ++r) {
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) d.at(r, col_[i]) = val_[i];
  }
  return d;
}

SparseMatrix SparseMatrix::from_dense(const QMatrix& d) {
  SparseMatrix m((uint32_t)d.rows, (uint32_t)d.cols);
  for (size_t r = 0; r < d.rows; ++r) {
    for (size_t c = 0; c < d.cols; ++c) {
      if (!d.at(r, c).is_zero()) {
        m.col_.push_back((uint32_t)c);
        m.val_.push_back(d.at(r, c));
      }
    }
    m.rowptr_[r + 1] = m.col_.size();
  }
  return m;
}

void SparseMatrix::validate() const {
  require(rowptr_.size() == nrows_ + 1 && rowptr_.front() == 0 && rowptr_.back() == col_.size() &&
              col_.size() == val_.size(),
          Errc::internal, "sparse structure corrupt");
  for (uint32_t r = 0; r < nrows_; ++r) {
    require(rowptr_[r] <= rowptr_[r + 1], Errc::internal, "sparse rowptr not monotone");
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) {
      require(col_[i] < ncols_, Errc::internal, "sparse column out of range");
      if (i > rowptr_[r]) {
        require(col_[i - 1] < col_[i], Errc::internal, "sparse columns not strictly increasing");
      }
      require(!val_[i].is_zero(), Errc::internal, "explicit zero stored");
    }
  }
}

std::vector<Rational> SparseMatrix::apply(std::span<const Rational> x) const {
  require(x.size() == ncols_, Errc::dimension_mismatch, "sparse apply size mismatch");
  std::vector<Rational> y(nrows_);
  for (uint32_t r = 0; r < nrows_; ++r) {
    Rational acc;
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) acc += val_[i] * x[col_[i]];
    y[r] = std::move(acc);
  }
  return y;
}

std::vector<Rational> SparseMatrix::apply_transposed(std::span<const Rational> x) const {
  require(x.size() == nrows_, Errc::dimension_mismatch, "sparse apply_transposed size mismatch");
  std::vector<Rational> y(ncols_);
  for (uint32_t r = 0; r < nrows_; ++r) {
    if (x[r].is_zero()) continue;
    for (size_t i = rowptr_[r]; i < rowptr_[r + 1]; ++i) y[col_[i]] += val_[i] * x[r];
  }
  return y;
}

void SparseMatrix::Builder::add(uint32_t col, Rational v) {
  require(col < ncols_, Errc::dimension_mismatch, "builder column out of range");
  pending_.emplace_back(col, std::move(v));
}

void SparseMatrix::Builder::finish_row() {
  std::sort(pending_.begin(), pending_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t i = 0;
  while (i < pending_.size()) {
    uint32_t c = pending_[i].first;
    Rational acc = std::move(pending_[i].second);
    ++i;
    while (i < pending_.size() && pending_[i].first == c) {
      acc += pending_[i].second;
      ++i;
    }
    if (!acc.is_zero()) {
      col_.push_back(c);
      val_.push_back(std::move(acc));
    }
  }
  pending_.clear();
  rowptr_.push_back(col_.size());
  ++nrows_;
}

void SparseMatrix::Builder::append_row(const RowView& rv, const Rational& scale) {
  for (size_t i = 0; i < rv.size(); ++i) add(rv.cols[i], scale * rv.vals[i]);
}

SparseMatrix SparseMatrix::Builder::take() {
  require(pending_.empty(), Errc::internal, "builder row left unfinished");
  SparseMatrix out;
  out.nrows_ = nrows_;
  out.ncols_ = ncols_;
  out.rowptr_ = std::move(rowptr_);
  out.col_ = std::move(col_);
  out.val_ = std::move(val_);
  nrows_ = 0;
  rowptr_ = {0};
  col_.clear();
  val_.clear();
  return out;
}

std::vector<uint64_t> SparseMod::apply(const PrimeField& f, std::span<const uint64_t> x) const {
  std::vector<uint64_t> y(nrows, 0);
  for (uint32_t r = 0; r < nrows; ++r) {
    uint64_t acc = 0;
    for (size_t i = rowptr[r]; i < rowptr[r + 1]; ++i) acc = f.add(acc, f.mul(val[i], x[col[i]]));
    y[r] = acc;
  }
  return y;
}

SparseMod project(const SparseMatrix& m, const PrimeField& f) {
  SparseMod out;
  out.nrows = m.nrows();
  out.ncols = m.ncols();
  out.rowptr.resize(m.nrows() + 1);
  out.rowptr[0] = 0;
  out.col.reserve(m.nnz());
  out.val.reserve(m.nnz());
  for (uint32_t r = 0; r < m.nrows(); ++r) {
    auto rv = m.row(r);
    for (size_t i = 0; i < rv.size(); ++i) {
      out.col.push_back(rv.cols[i]);
      out.val.push_back(f.project(rv.vals[i]));
    }
    out.rowptr[r + 1] = out.col.size();
  }
  return out;
}

}  // namespace tamm
