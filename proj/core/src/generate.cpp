#include "tamm/generate.hpp"

#include <initializer_list>

#include "tamm/strassen.hpp"

namespace tamm {

namespace {

void check_base_dim(uint32_t n0) {
  require(n0 >= 2 && n0 % 2 == 0, Errc::degenerate_parameter, "base dimension must be even");
  require(n0 != 16, Errc::degenerate_parameter,
          "base dimension 16 is degenerate (gamma vanishes)");
}

void append_block(SparseMatrix::Builder& b, const SparseMatrix& m) {
  Rational one(1);
  for (uint32_t r = 0; r < m.nrows(); ++r) {
    b.append_row(m.row(r), one);
    b.finish_row();
  }
}

}  // namespace

AggregationContext make_context(uint32_t n0) {
  check_base_dim(n0);
  AggregationContext ctx;
  ctx.n0 = n0;
  ctx.d = n0 / 2 + 1;
  ctx.gamma = Rational(1) - Rational(9, ctx.d);
  uint32_t d = ctx.d;
  for (uint32_t i = 0; i < d; ++i)
    for (uint32_t j = 0; j < d; ++j)
      for (uint32_t k = 0; k < d; ++k) {
        ctx.s_dot.push_back({i, j, k});
        if ((i <= j && j < k) || (k < j && j <= i)) ctx.s_hat.push_back({i, j, k});
      }
  size_t half_dot = ctx.s_dot.size(), half_hat = ctx.s_hat.size();
  for (size_t x = 0; x < half_dot; ++x) {
    auto t = ctx.s_dot[x];
    ctx.s_dot.push_back({t[0] + d, t[1] + d, t[2] + d});
  }
  for (size_t x = 0; x < half_hat; ++x) {
    auto t = ctx.s_hat[x];
    ctx.s_hat.push_back({t[0] + d, t[1] + d, t[2] + d});
  }
  for (uint32_t i = 0; i < d; ++i) {
    ctx.s_dot1.push_back({i, i, i});
    ctx.s_tilde1.push_back({i, i});
    for (uint32_t j = 0; j < d; ++j)
      if (i != j) ctx.s_tilde.push_back({i, j});
  }
  return ctx;
}

PhiTransform build_phi(uint32_t n0) {
  check_base_dim(n0);
  uint32_t h = n0 / 2, d = h + 1;
  PhiTransform pt;
  pt.L = QMatrix(d, h);
  for (uint32_t i = 0; i < h; ++i) pt.L.at(i, i) = Rational(1);
  for (uint32_t j = 0; j < h; ++j) pt.L.at(h, j) = Rational(-1);
  pt.R = QMatrix(h, d);
  Rational inv_d(1, d);
  for (uint32_t b = 0; b < h; ++b) {
    for (uint32_t y = 0; y < h; ++y) pt.R.at(b, y) = (b == y ? Rational(1) : Rational()) - inv_d;
    pt.R.at(b, h) = -inv_d;
  }
  SparseMatrix::Builder bphi(n0 * n0);
  for (uint32_t x = 0; x < 2 * d; ++x) {
    uint32_t qx = x / d, rx = x % d;
    for (uint32_t y = 0; y < 2 * d; ++y) {
      uint32_t qy = y / d, ry = y % d;
      for (uint32_t a = 0; a < h; ++a) {
        const Rational& lv = pt.L.at(rx, a);
        if (lv.is_zero()) continue;
        for (uint32_t b = 0; b < h; ++b) {
          Rational v = lv * pt.R.at(b, ry);
          if (!v.is_zero()) bphi.add((qx * h + a) * n0 + qy * h + b, std::move(v));
        }
      }
      bphi.finish_row();
    }
  }
  pt.phi = bphi.take();
  return pt;
}

RowBlock aggregation_rows(const AggregationContext& ctx, bool exclude_unbarred_diagonal) {
  uint32_t s0 = 4 * ctx.d * ctx.d;
  SparseMatrix::Builder bu(s0), bv(s0), bw(s0);
  RowBlock blk;
  Rational one(1), neg(-1);
  auto rep = [&](std::array<uint32_t, 3> t) -> std::array<int, 3> {
    uint32_t d = ctx.d;
    bool barred = t[0] >= d;
    if (barred) return {(int)(t[0] - d), (int)(t[1] - d), (int)(t[2] - d)};
    return {(int)t[0], (int)t[1], (int)t[2]};
  };
  for (const auto& t : ctx.s_hat) {
    uint32_t x = t[0], y = t[1], z = t[2];
    uint32_t xy = ctx.coord(x, y), yz = ctx.coord(y, z), zx = ctx.coord(z, x);
    bu.add(xy, one);
    bu.add(yz, one);
    bu.add(zx, one);
    bu.finish_row();
    bv.add(yz, one);
    bv.add(zx, one);
    bv.add(xy, one);
    bv.finish_row();
    bw.add(zx, one);
    bw.add(xy, one);
    bw.add(yz, one);
    bw.finish_row();
    blk.tags.push_back(AggTag{1, rep(t), t[0] >= ctx.d});
  }
  for (const auto& t : ctx.s_dot) {
    uint32_t x = t[0], y = t[1], z = t[2];
    if (exclude_unbarred_diagonal && x < ctx.d && x == y && y == z) continue;
    bu.add(ctx.coord(x, y), neg);
    bu.add(ctx.coord(ctx.bar(y), z), one);
    bu.add(ctx.coord(z, ctx.bar(x)), one);
    bu.finish_row();
    bv.add(ctx.coord(y, ctx.bar(z)), one);
    bv.add(ctx.coord(z, x), one);
    bv.add(ctx.coord(ctx.bar(x), y), one);
    bv.finish_row();
    bw.add(ctx.coord(ctx.bar(z), x), neg);
    bw.add(ctx.coord(x, ctx.bar(y)), one);
    bw.add(ctx.coord(y, z), one);
    bw.finish_row();
    blk.tags.push_back(AggTag{2, rep(t), t[0] >= ctx.d});
  }
  blk.U = bu.take();
  blk.V = bv.take();
  blk.W = bw.take();
  return blk;
}

RowBlock correction_block(const AggregationContext& ctx, uint32_t i) {
  require(i < ctx.d, Errc::dimension_mismatch, "diagonal index out of range");
  uint32_t s0 = 4 * ctx.d * ctx.d;
  const Rational one(1);
  const Rational D((long long)ctx.d);
  const Rational g = ctx.gamma;
  const Rational gp1 = g + one;
  const Rational ig = one / g;
  const Rational ig2 = ig * ig;
  uint32_t ii = ctx.coord(i, i), bi = ctx.coord(ctx.bar(i), i), ib = ctx.coord(i, ctx.bar(i)),
           bb = ctx.coord(ctx.bar(i), ctx.bar(i));
  SparseMatrix::Builder bu(s0), bv(s0), bw(s0);
  RowBlock blk;
  using E = std::pair<uint32_t, Rational>;
  auto row = [](SparseMatrix::Builder& b, std::initializer_list<E> es) {
    for (const auto& e : es) b.add(e.first, e.second);
    b.finish_row();
  };
  // slot 0
  row(bu, {{ii, -one}, {bi, one}, {ib, one}});
  row(bv, {{ii, one}, {bi, one}, {ib, one}});
  row(bw, {{bb, D * (one - g) / g}, {bi, (D - g) / g}, {ib, (g - D) / g}, {ii, one - D}});
  // slot 1
  row(bu, {{ib, one}});
  row(bv, {{bb, -gp1 / g}, {bi, -ig}, {ib, one - ig2}, {ii, (g - one) / g}});
  row(bw, {{bb, D}, {bi, D}, {ib, D * ig}, {ii, D}});
  // slot 2
  row(bu, {{ib, one}, {ii, g}});
  row(bv, {{bb, gp1 / g}, {bi, gp1 / g}, {ib, ig2}, {ii, ig}});
  row(bw, {{ib, D * ig}, {ii, D}});
  // slot 3
  row(bu, {{bi, one}, {ii, -gp1}});
  row(bv, {{bb, one}, {bi, one}, {ib, ig}, {ii, one}});
  row(bw, {{ib, D * ig2}, {ii, D + D * ig}});
  // slot 4
  row(bu, {{bb, one}, {bi, one}, {ib, -ig}, {ii, -one}});
  row(bv, {{bb, -gp1}, {ib, -ig}});
  row(bw, {{bb, D * (g - one) / g}, {bi, -D * ig}});
  // slot 5
  row(bu, {{bi, one}, {ii, -one}});
  row(bv, {{bb, -gp1}, {bi, -one}, {ib, -gp1 / g}, {ii, -one}});
  row(bw, {{bb, D * (one - g) / g}, {bi, D * ig}, {ib, -D * (g - one) * ig2}, {ii, D * ig}});
  // slot 6
  row(bu, {{bb, one}, {ib, -gp1 / g}});
  row(bv, {{bb, -one}, {ib, (g - one) / g}});
  row(bw, {{bb, D * ig}, {bi, D + D * ig}});
  for (int s = 0; s < 7; ++s) blk.tags.push_back(CorrectionTag{(int)i, s});
  blk.U = bu.take();
  blk.V = bv.take();
  blk.W = bw.take();
  return blk;
}

namespace {

// Operand embeddings of a 2x2 trace cell at (i,j): the local algorithm sees
//   A-hat = (gamma_ij A*_ij, A*_(bi)j, A*_i(bj), A*_(bi)(bj))
//   B-hat = (B*_ij, B*_(bi)j / gamma_ij, B*_i(bj), B*_(bi)(bj))
//   C-hat = -d (C*_ij, -C*_(bi)j, -C*_i(bj), gamma_ij C*_(bi)(bj))
struct CellEmbedding {
  SparseMatrix EA, EB, EC;
};

CellEmbedding cell_embedding(const AggregationContext& ctx, uint32_t i, uint32_t j) {
  Rational g = (i == j) ? ctx.gamma : Rational(1);
  Rational D((long long)ctx.d);
  uint32_t s0 = 4 * ctx.d * ctx.d;
  uint32_t c00 = ctx.coord(i, j), c01 = ctx.coord(ctx.bar(i), j), c10 = ctx.coord(i, ctx.bar(j)),
           c11 = ctx.coord(ctx.bar(i), ctx.bar(j));
  auto four = [&](Rational v0, Rational v1, Rational v2, Rational v3) {
    SparseMatrix::Builder b(s0);
    b.add(c00, std::move(v0));
    b.finish_row();
    b.add(c01, std::move(v1));
    b.finish_row();
    b.add(c10, std::move(v2));
    b.finish_row();
    b.add(c11, std::move(v3));
    b.finish_row();
    return b.take();
  };
  CellEmbedding e;
  e.EA = four(g, Rational(1), Rational(1), Rational(1));
  e.EB = four(Rational(1), Rational(1) / g, Rational(1), Rational(1));
  e.EC = four(-D, D, D, -D * g);
  return e;
}

CellRows trace_cells(const AggregationContext& ctx,
                     const std::vector<std::array<uint32_t, 2>>& cells, const CellChooser& chooser,
                     uint32_t base_row) {
  uint32_t s0 = 4 * ctx.d * ctx.d;
  SparseMatrix::Builder bu(s0), bv(s0), bw(s0);
  CellRows out;
  uint32_t at = 0;
  for (const auto& cell : cells) {
    BilinearAlgorithm local = chooser(cell);
    require(local.m == 2 && local.n == 2 && local.p == 2 && local.t() == 7, Errc::domain,
            "cell chooser must return a <2,2,2;7> algorithm");
    CellEmbedding e = cell_embedding(ctx, cell[0], cell[1]);
    append_block(bu, local.U.matmul(e.EA));
    append_block(bv, local.V.matmul(e.EB));
    append_block(bw, local.W.matmul(e.EC));
    for (int s = 0; s < 7; ++s)
      out.rows.tags.push_back(CancelTag{{(int)cell[0], (int)cell[1]}, s});
    TraceCell tc;
    tc.cell = {(int)cell[0], (int)cell[1]};
    tc.row0 = base_row + at;
    tc.local = std::move(local);
    tc.EA = std::move(e.EA);
    tc.EB = std::move(e.EB);
    tc.EC = std::move(e.EC);
    out.cells.push_back(std::move(tc));
    at += 7;
  }
  out.rows.U = bu.take();
  out.rows.V = bv.take();
  out.rows.W = bw.take();
  return out;
}

}  // namespace

CellRows cancellation_cells(const AggregationContext& ctx, const CellChooser& chooser,
                            uint32_t base_row) {
  return trace_cells(ctx, ctx.s_tilde, chooser, base_row);
}

CellRows diagonal_trace_cells(const AggregationContext& ctx, const CellChooser& chooser,
                              uint32_t base_row) {
  return trace_cells(ctx, ctx.s_tilde1, chooser, base_row);
}

QMatrix diag_K_U(const Rational& gamma) {
  QMatrix k(2, 2);
  k.at(0, 0) = Rational(-1) / gamma;
  k.at(0, 1) = Rational(1);
  k.at(1, 0) = Rational(1);
  return k;
}

QMatrix diag_K_V(const Rational& gamma) {
  QMatrix k(2, 2);
  k.at(0, 0) = Rational(1);
  k.at(0, 1) = gamma;
  k.at(1, 0) = Rational(1);
  return k;
}

BilinearAlgorithm default_diagonal_cell(const Rational& gamma) {
  return with_prescribed_rows(diag_K_U(gamma), diag_K_V(gamma));
}

namespace {

DecomposedAlgorithm assemble(uint32_t n0, PhiTransform pt,
                             const std::vector<const RowBlock*>& blocks) {
  uint32_t s0 = pt.phi.nrows();
  SparseMatrix::Builder bu(s0), bv(s0), bw(s0);
  std::vector<RowTag> tags;
  for (const RowBlock* blk : blocks) {
    append_block(bu, blk->U);
    append_block(bv, blk->V);
    append_block(bw, blk->W);
    tags.insert(tags.end(), blk->tags.begin(), blk->tags.end());
  }
  DecomposedAlgorithm dec;
  dec.n0 = n0;
  dec.phi = std::move(pt.phi);
  dec.U_phi = bu.take();
  dec.V_phi = bv.take();
  dec.W_phi = bw.take();
  dec.tags = std::move(tags);
  dec.validate();
  return dec;
}

}  // namespace

GeneratedAlgorithm gen_new25_cells(uint32_t n0) {
  AggregationContext ctx = make_context(n0);
  PhiTransform pt = build_phi(n0);
  RowBlock agg = aggregation_rows(ctx, true);
  std::vector<RowBlock> corr;
  corr.reserve(ctx.d);
  for (uint32_t i = 0; i < ctx.d; ++i) corr.push_back(correction_block(ctx, i));
  BilinearAlgorithm str = strassen();
  CellRows off = cancellation_cells(
      ctx, [&](std::array<uint32_t, 2>) { return str; }, agg.rows() + 7 * ctx.d);
  std::vector<const RowBlock*> blocks{&agg};
  for (const auto& blk : corr) blocks.push_back(&blk);
  blocks.push_back(&off.rows);
  return {assemble(n0, std::move(pt), blocks), std::move(off.cells)};
}

DecomposedAlgorithm gen_pan_decomposed(uint32_t n0) {
  AggregationContext ctx = make_context(n0);
  PhiTransform pt = build_phi(n0);
  RowBlock agg = aggregation_rows(ctx, false);
  BilinearAlgorithm diag_alg = default_diagonal_cell(ctx.gamma);
  CellRows diag = diagonal_trace_cells(
      ctx, [&](std::array<uint32_t, 2>) { return diag_alg; }, agg.rows());
  BilinearAlgorithm str = strassen();
  CellRows off = cancellation_cells(
      ctx, [&](std::array<uint32_t, 2>) { return str; }, agg.rows() + diag.rows.rows());
  return assemble(n0, std::move(pt), {&agg, &diag.rows, &off.rows});
}

DecomposedAlgorithm gen_new25_decomposed(uint32_t n0) { return gen_new25_cells(n0).dec; }

BilinearAlgorithm gen_pan(uint32_t n0) { return gen_pan_decomposed(n0).expand(); }

BilinearAlgorithm gen_new25(uint32_t n0) { return gen_new25_cells(n0).dec.expand(); }

}  // namespace tamm
