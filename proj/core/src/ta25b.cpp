#include "tamm/ta25b.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <span>
#include <vector>

#include "tamm/error.hpp"
#include "tamm/ops.hpp"
#include "tamm/prime_field.hpp"
#include "tamm/rng.hpp"

namespace tamm {

Ta25bAlgorithm gen_new25b(uint32_t m0) { return {m0, gen_new25_cells(m0), std::nullopt}; }

Ta25bAlgorithm gen_new25b(uint32_t m0, BilinearAlgorithm replacement) {
  require(replacement.m == 4 && replacement.n == 4 && replacement.p == 4,
          Errc::dimension_mismatch, "replacement must be a <4,4,4> algorithm");
  require(replacement.t() <= 49, Errc::domain, "replacement must use at most 49 products");
  const VerifyReport rep = verify_exact(replacement);
  require(rep.ok, Errc::verification, "replacement fails verification: " + rep.detail);
  stamp(replacement, rep);
  return {m0, gen_new25_cells(m0), std::move(replacement)};
}

BilinearAlgorithm expand(const Ta25bAlgorithm& alg) {
  const BilinearAlgorithm f = alg.factor.dec.expand();
  BilinearAlgorithm out = compose(f, f);
  if (!alg.replacement) return out;

  const size_t tp = f.t();
  const uint32_t tpp = alg.replacement->t();
  // Current position of every original composed row; blocks are disjoint, so
  // positions only need adjusting for the rows each substitution removes.
  std::vector<uint32_t> pos(out.t());
  std::iota(pos.begin(), pos.end(), 0u);
  for (const TraceCell& ci : alg.factor.cells) {
    for (const TraceCell& cj : alg.factor.cells) {
      std::vector<uint32_t> rows(49);
      for (uint32_t a = 0; a < 7; ++a)
        for (uint32_t b = 0; b < 7; ++b)
          rows[a * 7 + b] = pos[(ci.row0 + a) * tp + (cj.row0 + b)];
      out = substitute_subalgorithm(out, rows, ci, cj, alg.factor.dec.phi, alg.factor.dec.phi,
                                    *alg.replacement);
      std::sort(rows.begin(), rows.end());
      const uint32_t at = rows.front();
      for (uint32_t& x : pos) {
        if (x == UINT32_MAX || x < at) continue;
        if (std::binary_search(rows.begin(), rows.end(), x)) {
          x = UINT32_MAX;
          continue;
        }
        const auto removed_before = std::lower_bound(rows.begin(), rows.end(), x) - rows.begin();
        x = x - static_cast<uint32_t>(removed_before) + tpp;
      }
    }
  }
  return out;
}

namespace {

std::vector<uint64_t> sample_vec(const PrimeField& f, Rng& rng, uint32_t n) {
  std::vector<uint64_t> v(n);
  for (uint64_t& e : v) e = f.sample(rng);
  return v;
}

uint64_t dot(const PrimeField& f, std::span<const uint64_t> a, std::span<const uint64_t> b) {
  uint64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

// Y = phi * Z * phi^T for the pair-relabeled rank-1 operand
// Z[x1*m+y1, x2*m+y2] = xv[x1*m+x2] * yv[y1*m+y2].
std::vector<uint64_t> transformed_gram(const PrimeField& f, const SparseMod& phi, uint32_t m,
                                       std::span<const uint64_t> xv,
                                       std::span<const uint64_t> yv) {
  const uint32_t mm = m * m;
  const uint32_t s0 = phi.nrows;
  std::vector<uint64_t> Z(static_cast<size_t>(mm) * mm);
  for (uint32_t x1 = 0; x1 < m; ++x1)
    for (uint32_t y1 = 0; y1 < m; ++y1) {
      uint64_t* zrow = &Z[static_cast<size_t>(x1 * m + y1) * mm];
      for (uint32_t x2 = 0; x2 < m; ++x2) {
        const uint64_t xe = xv[x1 * m + x2];
        for (uint32_t y2 = 0; y2 < m; ++y2) zrow[x2 * m + y2] = f.mul(xe, yv[y1 * m + y2]);
      }
    }
  std::vector<uint64_t> T(static_cast<size_t>(s0) * mm, 0);
  for (uint32_t r = 0; r < s0; ++r) {
    uint64_t* trow = &T[static_cast<size_t>(r) * mm];
    for (size_t k = phi.rowptr[r]; k < phi.rowptr[r + 1]; ++k) {
      const uint64_t v = phi.val[k];
      const uint64_t* zrow = &Z[static_cast<size_t>(phi.col[k]) * mm];
      for (uint32_t c = 0; c < mm; ++c) trow[c] = f.add(trow[c], f.mul(v, zrow[c]));
    }
  }
  std::vector<uint64_t> Y(static_cast<size_t>(s0) * s0, 0);
  for (uint32_t c = 0; c < s0; ++c) {
    for (size_t k = phi.rowptr[c]; k < phi.rowptr[c + 1]; ++k) {
      const uint64_t v = phi.val[k];
      const uint32_t cc = phi.col[k];
      for (uint32_t r = 0; r < s0; ++r) {
        uint64_t& y = Y[static_cast<size_t>(r) * s0 + c];
        y = f.add(y, f.mul(v, T[static_cast<size_t>(r) * mm + cc]));
      }
    }
  }
  return Y;
}

// mid = Y * M^T laid out slot-major: mid[k * t + r] = (Y M^T)[k, r].
std::vector<uint64_t> gram_times_rows(const PrimeField& f, std::span<const uint64_t> Y,
                                      uint32_t s0, const SparseMod& M) {
  const uint32_t t = M.nrows;
  std::vector<uint64_t> mid(static_cast<size_t>(s0) * t, 0);
  for (uint32_t r = 0; r < t; ++r) {
    for (size_t k = M.rowptr[r]; k < M.rowptr[r + 1]; ++k) {
      const uint64_t v = M.val[k];
      const uint32_t c = M.col[k];
      for (uint32_t i = 0; i < s0; ++i) {
        uint64_t& e = mid[static_cast<size_t>(i) * t + r];
        e = f.add(e, f.mul(v, Y[static_cast<size_t>(i) * s0 + c]));
      }
    }
  }
  return mid;
}

void expand_row(const PrimeField& f, const SparseMod& M, uint32_t r,
                std::span<const uint64_t> mid, std::vector<uint64_t>& out) {
  std::fill(out.begin(), out.end(), 0);
  const uint32_t t = M.nrows;
  for (size_t k = M.rowptr[r]; k < M.rowptr[r + 1]; ++k) {
    const uint64_t v = M.val[k];
    const uint64_t* src = &mid[static_cast<size_t>(M.col[k]) * t];
    for (uint32_t rr = 0; rr < t; ++rr) out[rr] = f.add(out[rr], f.mul(v, src[rr]));
  }
}

uint64_t grid_sum(const PrimeField& f, const SparseMod& up, const SparseMod& vp,
                  const SparseMod& wp, std::span<const uint64_t> au,
                  std::span<const uint64_t> av, std::span<const uint64_t> aw) {
  const uint32_t tp = up.nrows;
  std::vector<uint64_t> ru(tp), rv(tp), rw(tp);
  uint64_t acc = 0;
  for (uint32_t rl = 0; rl < tp; ++rl) {
    expand_row(f, up, rl, au, ru);
    expand_row(f, vp, rl, av, rv);
    expand_row(f, wp, rl, aw, rw);
    for (uint32_t rr = 0; rr < tp; ++rr) acc = f.add(acc, f.mul(f.mul(ru[rr], rv[rr]), rw[rr]));
  }
  return acc;
}

struct CellData {
  SparseMod ea, eb, ec;                  // 4 x s0 embeddings
  std::vector<uint64_t> lu, lv, lw;      // 7 x 4 dense local matrices
};

std::vector<uint64_t> dense_local(const PrimeField& f, const SparseMatrix& m) {
  std::vector<uint64_t> out(static_cast<size_t>(m.nrows()) * m.ncols(), 0);
  for (uint32_t r = 0; r < m.nrows(); ++r) {
    const auto rv = m.row(r);
    for (size_t k = 0; k < rv.size(); ++k)
      out[static_cast<size_t>(r) * m.ncols() + rv.cols[k]] = f.project(rv.vals[k]);
  }
  return out;
}

// G[a*4+b] = (E_i Y E_j^T)[a, b]
void cell_gram(const PrimeField& f, const SparseMod& ei, const SparseMod& ej,
               std::span<const uint64_t> Y, uint32_t s0, uint64_t G[16]) {
  for (uint32_t a = 0; a < 4; ++a)
    for (uint32_t b = 0; b < 4; ++b) {
      uint64_t acc = 0;
      for (size_t ka = ei.rowptr[a]; ka < ei.rowptr[a + 1]; ++ka)
        for (size_t kb = ej.rowptr[b]; kb < ej.rowptr[b + 1]; ++kb) {
          const uint64_t y = Y[static_cast<size_t>(ei.col[ka]) * s0 + ej.col[kb]];
          acc = f.add(acc, f.mul(f.mul(ei.val[ka], y), ej.val[kb]));
        }
      G[a * 4 + b] = acc;
    }
}

// sum over the 7x7 block of (L_i G L_j^T) values across the three operands
uint64_t block_sum(const PrimeField& f, const CellData& ci, const CellData& cj,
                   const uint64_t GU[16], const uint64_t GV[16], const uint64_t GW[16]) {
  auto sandwich = [&](const std::vector<uint64_t>& li, const std::vector<uint64_t>& lj,
                      const uint64_t G[16], uint64_t H[49]) {
    uint64_t LG[28];  // 7 x 4
    for (uint32_t a = 0; a < 7; ++a)
      for (uint32_t b = 0; b < 4; ++b) {
        uint64_t acc = 0;
        for (uint32_t k = 0; k < 4; ++k) acc = f.add(acc, f.mul(li[a * 4 + k], G[k * 4 + b]));
        LG[a * 4 + b] = acc;
      }
    for (uint32_t a = 0; a < 7; ++a)
      for (uint32_t b = 0; b < 7; ++b) {
        uint64_t acc = 0;
        for (uint32_t k = 0; k < 4; ++k) acc = f.add(acc, f.mul(LG[a * 4 + k], lj[b * 4 + k]));
        H[a * 7 + b] = acc;
      }
  };
  uint64_t HU[49], HV[49], HW[49];
  sandwich(ci.lu, cj.lu, GU, HU);
  sandwich(ci.lv, cj.lv, GV, HV);
  sandwich(ci.lw, cj.lw, GW, HW);
  uint64_t acc = 0;
  for (uint32_t k = 0; k < 49; ++k) acc = f.add(acc, f.mul(f.mul(HU[k], HV[k]), HW[k]));
  return acc;
}

// Relabels the kron-pair gram into the replacement's plain 4x4 slot order.
void pair_slots(const uint64_t G[16], uint64_t out[16]) {
  for (uint32_t x1 = 0; x1 < 2; ++x1)
    for (uint32_t x2 = 0; x2 < 2; ++x2)
      for (uint32_t y1 = 0; y1 < 2; ++y1)
        for (uint32_t y2 = 0; y2 < 2; ++y2)
          out[8 * x1 + 4 * x2 + 2 * y1 + y2] = G[(2 * x1 + y1) * 4 + 2 * x2 + y2];
}

uint64_t replacement_sum(const PrimeField& f, const SparseMod& ru, const SparseMod& rv,
                         const SparseMod& rw, const uint64_t GU[16], const uint64_t GV[16],
                         const uint64_t GW[16]) {
  uint64_t gu[16], gv[16], gw[16];
  pair_slots(GU, gu);
  pair_slots(GV, gv);
  pair_slots(GW, gw);
  const auto u = ru.apply(f, std::span<const uint64_t>(gu, 16));
  const auto v = rv.apply(f, std::span<const uint64_t>(gv, 16));
  const auto w = rw.apply(f, std::span<const uint64_t>(gw, 16));
  uint64_t acc = 0;
  for (size_t k = 0; k < u.size(); ++k) acc = f.add(acc, f.mul(f.mul(u[k], v[k]), w[k]));
  return acc;
}

}  // namespace

VerifyReport verify_random(const Ta25bAlgorithm& alg, int trials, uint64_t prime, uint64_t seed) {
  VerifyReport report{"random", false, "", prime, trials, seed};
  const PrimeField f(prime);
  Rng rng(seed);
  const DecomposedAlgorithm& dec = alg.factor.dec;
  const uint32_t m = alg.m0;
  const uint32_t nn = alg.n0();
  const uint32_t s0 = dec.s0();

  const SparseMod phi = project(dec.phi, f);
  const SparseMod up = project(dec.U_phi, f);
  const SparseMod vp = project(dec.V_phi, f);
  const SparseMod wp = project(dec.W_phi, f);

  std::vector<CellData> cells;
  SparseMod ru, rv, rw;
  if (alg.replacement) {
    cells.reserve(alg.factor.cells.size());
    for (const TraceCell& c : alg.factor.cells) {
      cells.push_back({project(c.EA, f), project(c.EB, f), project(c.EC, f),
                       dense_local(f, c.local.U), dense_local(f, c.local.V),
                       dense_local(f, c.local.W)});
    }
    ru = project(alg.replacement->U, f);
    rv = project(alg.replacement->V, f);
    rw = project(alg.replacement->W, f);
  }

  for (int trial = 0; trial < trials; ++trial) {
    const auto xa = sample_vec(f, rng, nn), ya = sample_vec(f, rng, nn);
    const auto xb = sample_vec(f, rng, nn), yb = sample_vec(f, rng, nn);
    const auto xc = sample_vec(f, rng, nn), yc = sample_vec(f, rng, nn);

    const auto YA = transformed_gram(f, phi, m, xa, ya);
    const auto YB = transformed_gram(f, phi, m, xb, yb);
    const auto YC = transformed_gram(f, phi, m, xc, yc);

    const auto au = gram_times_rows(f, YA, s0, up);
    const auto av = gram_times_rows(f, YB, s0, vp);
    const auto aw = gram_times_rows(f, YC, s0, wp);
    uint64_t lhs = grid_sum(f, up, vp, wp, au, av, aw);

    if (alg.replacement) {
      for (size_t i = 0; i < cells.size(); ++i)
        for (size_t j = 0; j < cells.size(); ++j) {
          uint64_t GU[16], GV[16], GW[16];
          cell_gram(f, cells[i].ea, cells[j].ea, YA, s0, GU);
          cell_gram(f, cells[i].eb, cells[j].eb, YB, s0, GV);
          cell_gram(f, cells[i].ec, cells[j].ec, YC, s0, GW);
          lhs = f.sub(lhs, block_sum(f, cells[i], cells[j], GU, GV, GW));
          lhs = f.add(lhs, replacement_sum(f, ru, rv, rw, GU, GV, GW));
        }
    }

    const uint64_t rhs = f.mul(f.mul(dot(f, ya, xb), dot(f, yb, xc)), dot(f, yc, xa));
    if (lhs != rhs) {
      report.detail = "trace mismatch on trial " + std::to_string(trial);
      return report;
    }
  }
  report.ok = true;
  return report;
}

}  // namespace tamm
