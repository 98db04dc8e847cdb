#include "tamm/ops.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tamm {

namespace {

Verification derived(const Verification& base, const char* provenance) {
  Verification v = base;
  v.provenance = provenance;
  return v;
}

std::optional<Verification> propagate(const std::optional<Verification>& a, const char* op) {
  if (a && a->mode != "") return derived(*a, op);
  return std::nullopt;
}

std::optional<Verification> propagate2(const std::optional<Verification>& a,
                                       const std::optional<Verification>& b, const char* op) {
  if (a && b) return derived(*a, op);
  return std::nullopt;
}

// Composition must stay in plain row-major coordinates: kron pairs columns as
// (x1, y1, x2, y2) while vec of the composed operand orders them
// (x1, x2, y1, y2), so every product entry gets its column relabeled.
SparseMatrix shuffled_kron(const SparseMatrix& A, const SparseMatrix& B, uint32_t r1, uint32_t c1,
                           uint32_t r2, uint32_t c2) {
  require(A.ncols() == r1 * c1 && B.ncols() == r2 * c2, Errc::dimension_mismatch,
          "operand grid does not match column counts");
  uint64_t wide = (uint64_t)r1 * r2 * c1 * c2;
  require(wide < (1ull << 32), Errc::dimension_mismatch, "composed operand too large");
  SparseMatrix::Builder out((uint32_t)wide);
  for (uint32_t i = 0; i < A.nrows(); ++i) {
    auto ra = A.row(i);
    for (uint32_t j = 0; j < B.nrows(); ++j) {
      auto rb = B.row(j);
      for (size_t k = 0; k < ra.cols.size(); ++k) {
        uint32_t x1 = ra.cols[k] / c1, y1 = ra.cols[k] % c1;
        for (size_t l = 0; l < rb.cols.size(); ++l) {
          uint32_t x2 = rb.cols[l] / c2, y2 = rb.cols[l] % c2;
          out.add((x1 * r2 + x2) * (c1 * c2) + y1 * c2 + y2, ra.vals[k] * rb.vals[l]);
        }
      }
      out.finish_row();
    }
  }
  return out.take();
}

// Permutation taking plain vec columns of a (r1 r2) x (c1 c2) operand to the
// kron pair order used by slot products.
SparseMatrix vec_shuffle(uint32_t r1, uint32_t c1, uint32_t r2, uint32_t c2) {
  std::vector<Triple> ts;
  ts.reserve((size_t)r1 * r2 * c1 * c2);
  for (uint32_t x1 = 0; x1 < r1; ++x1)
    for (uint32_t y1 = 0; y1 < c1; ++y1)
      for (uint32_t x2 = 0; x2 < r2; ++x2)
        for (uint32_t y2 = 0; y2 < c2; ++y2)
          ts.push_back({(x1 * r2 + x2) * (c1 * c2) + y1 * c2 + y2,
                        (x1 * c1 + y1) * (r2 * c2) + x2 * c2 + y2, Rational(1)});
  return SparseMatrix::from_triples(r1 * r2 * c1 * c2, r1 * r2 * c1 * c2, std::move(ts));
}

}  // namespace

QMatrix apply_bilinear(const BilinearAlgorithm& alg, const QMatrix& A, const QMatrix& B) {
  require(A.rows == alg.m && A.cols == alg.n && B.rows == alg.n && B.cols == alg.p,
          Errc::dimension_mismatch, "operand shapes do not match algorithm dims");
  std::vector<Rational> u = alg.U.apply(vectorize(A, alg.m, alg.n, 1));
  std::vector<Rational> v = alg.V.apply(vectorize(B, alg.n, alg.p, 1));
  for (size_t i = 0; i < u.size(); ++i) u[i] *= v[i];
  std::vector<Rational> ct = alg.W.apply_transposed(u);
  return matricize(ct, alg.p, alg.m, 1).transposed();
}

Rational trilinear_value(const BilinearAlgorithm& alg, const QMatrix& A, const QMatrix& B,
                         const QMatrix& C) {
  require(C.rows == alg.p && C.cols == alg.m, Errc::dimension_mismatch,
          "third operand must be p x m");
  std::vector<Rational> u = alg.U.apply(vectorize(A, alg.m, alg.n, 1));
  std::vector<Rational> v = alg.V.apply(vectorize(B, alg.n, alg.p, 1));
  std::vector<Rational> w = alg.W.apply(vectorize(C, alg.p, alg.m, 1));
  Rational acc;
  for (size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i] * w[i];
  return acc;
}

BilinearAlgorithm rotate(const BilinearAlgorithm& alg) {
  BilinearAlgorithm r;
  r.m = alg.n;
  r.n = alg.p;
  r.p = alg.m;
  r.U = alg.V;
  r.V = alg.W;
  r.W = alg.U;
  r.tags = alg.tags;
  r.verified = propagate(alg.verified, "rotate");
  return r;
}

BilinearAlgorithm compose(const BilinearAlgorithm& a, const BilinearAlgorithm& b) {
  BilinearAlgorithm c;
  c.m = a.m * b.m;
  c.n = a.n * b.n;
  c.p = a.p * b.p;
  c.U = shuffled_kron(a.U, b.U, a.m, a.n, b.m, b.n);
  c.V = shuffled_kron(a.V, b.V, a.n, a.p, b.n, b.p);
  c.W = shuffled_kron(a.W, b.W, a.p, a.m, b.p, b.m);
  c.tags.reserve((size_t)a.t() * b.t());
  for (uint32_t r1 = 0; r1 < a.t(); ++r1)
    for (uint32_t r2 = 0; r2 < b.t(); ++r2) c.tags.push_back(ComposedTag{r1, r2});
  c.verified = propagate2(a.verified, b.verified, "compose");
  return c;
}

DecomposedAlgorithm compose(const BilinearAlgorithm& a, const DecomposedAlgorithm& b) {
  require(a.m == a.n && a.n == a.p, Errc::dimension_mismatch,
          "left factor must be square to compose with a compressed algorithm");
  uint32_t n = a.n, n0 = b.n0;
  DecomposedAlgorithm c;
  c.n0 = n * n0;
  // Blockwise basis transform in plain coordinates: row (x1,y1,r) applies
  // phi row r to the (x1,y1) block of the composed operand.
  SparseMatrix::Builder bphi((uint32_t)((uint64_t)c.n0 * c.n0));
  for (uint32_t x1 = 0; x1 < n; ++x1)
    for (uint32_t y1 = 0; y1 < n; ++y1)
      for (uint32_t r = 0; r < b.phi.nrows(); ++r) {
        auto rv = b.phi.row(r);
        for (size_t k = 0; k < rv.cols.size(); ++k) {
          uint32_t x2 = rv.cols[k] / n0, y2 = rv.cols[k] % n0;
          bphi.add((x1 * n0 + x2) * c.n0 + y1 * n0 + y2, rv.vals[k]);
        }
        bphi.finish_row();
      }
  c.phi = bphi.take();
  c.U_phi = a.U.kron(b.U_phi);
  c.V_phi = a.V.kron(b.V_phi);
  c.W_phi = a.W.kron(b.W_phi);
  c.tags.reserve((size_t)a.t() * b.t());
  for (uint32_t r1 = 0; r1 < a.t(); ++r1)
    for (uint32_t r2 = 0; r2 < b.t(); ++r2) c.tags.push_back(ComposedTag{r1, r2});
  c.verified = propagate2(a.verified, b.verified, "compose");
  c.validate();
  return c;
}

BilinearAlgorithm symmetrize(const BilinearAlgorithm& alg) {
  BilinearAlgorithm r1 = rotate(alg);
  BilinearAlgorithm r2 = rotate(r1);
  return compose(alg, compose(r1, r2));
}

namespace {

struct PairHash {
  size_t operator()(const std::pair<size_t, size_t>& p) const {
    return p.first * 0x9e3779b97f4a7c15ull ^ (p.second + (p.first << 13));
  }
};

// Which two matrices must agree for agreement class k.
enum class Agree { UV, VW, UW };

bool rows_agree(const BilinearAlgorithm& a, uint32_t i, uint32_t j, Agree what) {
  switch (what) {
    case Agree::UV:
      return a.U.row_equal(i, a.U, j) && a.V.row_equal(i, a.V, j);
    case Agree::VW:
      return a.V.row_equal(i, a.V, j) && a.W.row_equal(i, a.W, j);
    case Agree::UW:
      return a.U.row_equal(i, a.U, j) && a.W.row_equal(i, a.W, j);
  }
  return false;
}

}  // namespace

std::vector<std::pair<uint32_t, uint32_t>> find_kin_pairs(const BilinearAlgorithm& alg) {
  uint32_t t = alg.t();
  std::vector<size_t> hu(t), hv(t), hw(t);
  for (uint32_t r = 0; r < t; ++r) {
    hu[r] = alg.U.row_hash(r);
    hv[r] = alg.V.row_hash(r);
    hw[r] = alg.W.row_hash(r);
  }
  using Bucket = std::unordered_map<std::pair<size_t, size_t>, std::vector<uint32_t>, PairHash>;
  Bucket buv, bvw, buw;
  for (uint32_t r = 0; r < t; ++r) {
    buv[{hu[r], hv[r]}].push_back(r);
    bvw[{hv[r], hw[r]}].push_back(r);
    buw[{hu[r], hw[r]}].push_back(r);
  }
  std::vector<char> used(t, 0);
  std::vector<std::pair<uint32_t, uint32_t>> pairs;
  std::vector<uint32_t> cands;
  for (uint32_t i = 0; i < t; ++i) {
    if (used[i]) continue;
    cands.clear();
    auto gather = [&](Bucket& b, std::pair<size_t, size_t> key, Agree what) {
      auto it = b.find(key);
      if (it == b.end()) return;
      for (uint32_t j : it->second) {
        if (j > i && !used[j] && rows_agree(alg, i, j, what)) cands.push_back(j);
      }
    };
    gather(buv, {hu[i], hv[i]}, Agree::UV);
    gather(bvw, {hv[i], hw[i]}, Agree::VW);
    gather(buw, {hu[i], hw[i]}, Agree::UW);
    if (cands.empty()) continue;
    uint32_t j = *std::min_element(cands.begin(), cands.end());
    pairs.emplace_back(i, j);
    used[i] = used[j] = 1;
  }
  return pairs;
}

BilinearAlgorithm merge_kin(const BilinearAlgorithm& alg,
                            const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
  uint32_t t = alg.t();
  std::vector<char> used(t, 0);
  // For each surviving row, which matrix receives the summed rows.
  std::vector<std::pair<uint32_t, Agree>> merged(t, {UINT32_MAX, Agree::UV});
  for (auto [i, j] : pairs) {
    require(i < j && j < t, Errc::dimension_mismatch, "kin pair indices out of range");
    require(!used[i] && !used[j], Errc::domain, "kin pairs overlap");
    used[i] = used[j] = 1;
    Agree what;
    if (rows_agree(alg, i, j, Agree::UV)) {
      what = Agree::UV;
    } else if (rows_agree(alg, i, j, Agree::VW)) {
      what = Agree::VW;
    } else if (rows_agree(alg, i, j, Agree::UW)) {
      what = Agree::UW;
    } else {
      fail(Errc::domain, "rows are not kin");
    }
    merged[i] = {j, what};
  }
  std::vector<char> dropped(t, 0);
  for (auto [i, j] : pairs) dropped[j] = 1;

  SparseMatrix::Builder bu(alg.U.ncols()), bv(alg.V.ncols()), bw(alg.W.ncols());
  std::vector<RowTag> tags;
  Rational one(1);
  for (uint32_t r = 0; r < t; ++r) {
    if (dropped[r]) continue;
    uint32_t partner = merged[r].first;
    Agree what = merged[r].second;
    bu.append_row(alg.U.row(r), one);
    if (partner != UINT32_MAX && what == Agree::VW) bu.append_row(alg.U.row(partner), one);
    bu.finish_row();
    bv.append_row(alg.V.row(r), one);
    if (partner != UINT32_MAX && what == Agree::UW) bv.append_row(alg.V.row(partner), one);
    bv.finish_row();
    bw.append_row(alg.W.row(r), one);
    if (partner != UINT32_MAX && what == Agree::UV) bw.append_row(alg.W.row(partner), one);
    bw.finish_row();
    if (!alg.tags.empty()) tags.push_back(alg.tags[r]);
  }
  BilinearAlgorithm out;
  out.m = alg.m;
  out.n = alg.n;
  out.p = alg.p;
  out.U = bu.take();
  out.V = bv.take();
  out.W = bw.take();
  out.tags = std::move(tags);
  out.verified = propagate(alg.verified, "merge_kin");
  return out;
}

BilinearAlgorithm degroote_transform(const BilinearAlgorithm& alg, const QMatrix& K) {
  require(K.rows == alg.n && K.cols == alg.n, Errc::dimension_mismatch,
          "transform must match the middle dimension");
  QMatrix Kinv = q_inverse(K);
  SparseMatrix right_u =
      SparseMatrix::identity(alg.m).kron(SparseMatrix::from_dense(K.transposed()));
  SparseMatrix right_v = SparseMatrix::from_dense(Kinv).kron(SparseMatrix::identity(alg.p));
  BilinearAlgorithm out;
  out.m = alg.m;
  out.n = alg.n;
  out.p = alg.p;
  out.U = alg.U.matmul(right_u);
  out.V = alg.V.matmul(right_v);
  out.W = alg.W;
  out.tags = alg.tags;
  out.verified = propagate(alg.verified, "degroote_transform");
  return out;
}

namespace {

// Full-basis rows contributed by a factor cell: local matrix row a through
// embedding E and basis transform phi.
SparseMatrix cell_rows(const SparseMatrix& local, const SparseMatrix& E, const SparseMatrix& phi) {
  return local.matmul(E).matmul(phi);
}

uint32_t exact_sqrt(uint32_t n) {
  uint32_t r = (uint32_t)std::lround(std::sqrt((double)n));
  require(r * r == n, Errc::dimension_mismatch, "basis transform is not square-operand");
  return r;
}

}  // namespace

BilinearAlgorithm substitute_subalgorithm(const BilinearAlgorithm& alg,
                                          const std::vector<uint32_t>& rows, const TraceCell& cl,
                                          const TraceCell& cr, const SparseMatrix& phi_left,
                                          const SparseMatrix& phi_right,
                                          const BilinearAlgorithm& replacement) {
  require(rows.size() == 49, Errc::dimension_mismatch, "cell block must have 49 rows");
  require(replacement.m == 4 && replacement.n == 4 && replacement.p == 4,
          Errc::dimension_mismatch, "replacement must be a <4,4,4> algorithm");
  require(replacement.verified.has_value(), Errc::verification, "replacement is not verified");
  for (uint32_t r : rows)
    require(r < alg.t(), Errc::dimension_mismatch, "block row out of range");

  uint32_t n1 = exact_sqrt(phi_left.ncols()), n2 = exact_sqrt(phi_right.ncols());
  SparseMatrix lu = cell_rows(cl.local.U, cl.EA, phi_left);
  SparseMatrix lv = cell_rows(cl.local.V, cl.EB, phi_left);
  SparseMatrix lw = cell_rows(cl.local.W, cl.EC, phi_left);
  SparseMatrix ru = cell_rows(cr.local.U, cr.EA, phi_right);
  SparseMatrix rv = cell_rows(cr.local.V, cr.EB, phi_right);
  SparseMatrix rw = cell_rows(cr.local.W, cr.EC, phi_right);
  SparseMatrix eu = shuffled_kron(lu, ru, n1, n1, n2, n2);  // expected 49-row block
  SparseMatrix ev = shuffled_kron(lv, rv, n1, n1, n2, n2);
  SparseMatrix ew = shuffled_kron(lw, rw, n1, n1, n2, n2);
  for (int k = 0; k < 49; ++k) {
    bool ok = alg.U.row_equal(rows[k], eu, k) && alg.V.row_equal(rows[k], ev, k) &&
              alg.W.row_equal(rows[k], ew, k);
    require(ok, Errc::verification, "block rows do not factor through the given cells");
  }

  // 16 scaled operand slots in kron pair order, columns in plain coordinates.
  SparseMatrix fu =
      shuffled_kron(cl.EA.matmul(phi_left), cr.EA.matmul(phi_right), n1, n1, n2, n2);
  SparseMatrix fv =
      shuffled_kron(cl.EB.matmul(phi_left), cr.EB.matmul(phi_right), n1, n1, n2, n2);
  SparseMatrix fw =
      shuffled_kron(cl.EC.matmul(phi_left), cr.EC.matmul(phi_right), n1, n1, n2, n2);
  // The replacement speaks plain 4x4 coordinates; its slot space pairs the
  // factors, so its columns get the same relabeling.
  SparseMatrix slot = vec_shuffle(2, 2, 2, 2);
  SparseMatrix nu = replacement.U.matmul(slot).matmul(fu);
  SparseMatrix nv = replacement.V.matmul(slot).matmul(fv);
  SparseMatrix nw = replacement.W.matmul(slot).matmul(fw);

  std::vector<char> drop(alg.t(), 0);
  for (uint32_t r : rows) drop[r] = 1;
  uint32_t insert_at = *std::min_element(rows.begin(), rows.end());

  SparseMatrix::Builder bu(alg.U.ncols()), bv(alg.V.ncols()), bw(alg.W.ncols());
  std::vector<RowTag> tags;
  Rational one(1);
  auto emit_replacement = [&]() {
    for (uint32_t g = 0; g < replacement.t(); ++g) {
      bu.append_row(nu.row(g), one);
      bu.finish_row();
      bv.append_row(nv.row(g), one);
      bv.finish_row();
      bw.append_row(nw.row(g), one);
      bw.finish_row();
      tags.push_back(UntaggedTag{});
    }
  };
  for (uint32_t r = 0; r < alg.t(); ++r) {
    if (r == insert_at) emit_replacement();
    if (drop[r]) continue;
    bu.append_row(alg.U.row(r), one);
    bu.finish_row();
    bv.append_row(alg.V.row(r), one);
    bv.finish_row();
    bw.append_row(alg.W.row(r), one);
    bw.finish_row();
    tags.push_back(alg.tags.empty() ? RowTag(UntaggedTag{}) : alg.tags[r]);
  }
  BilinearAlgorithm out;
  out.m = alg.m;
  out.n = alg.n;
  out.p = alg.p;
  out.U = bu.take();
  out.V = bv.take();
  out.W = bw.take();
  out.tags = std::move(tags);
  out.verified = propagate2(alg.verified, replacement.verified, "substitute_subalgorithm");
  return out;
}

BilinearAlgorithm naive_algorithm(uint32_t m, uint32_t n, uint32_t p) {
  SparseMatrix::Builder bu(m * n), bv(n * p), bw(p * m);
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t j = 0; j < n; ++j)
      for (uint32_t k = 0; k < p; ++k) {
        bu.add(i * n + j, Rational(1));
        bu.finish_row();
        bv.add(j * p + k, Rational(1));
        bv.finish_row();
        bw.add(k * m + i, Rational(1));
        bw.finish_row();
      }
  BilinearAlgorithm a;
  a.m = m;
  a.n = n;
  a.p = p;
  a.U = bu.take();
  a.V = bv.take();
  a.W = bw.take();
  return a;
}

}  // namespace tamm
