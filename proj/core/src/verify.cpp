#include "tamm/verify.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "tamm/engine.hpp"
#include "tamm/ops.hpp"
#include "tamm/rng.hpp"

namespace tamm {

namespace {

constexpr uint64_t pack(uint32_t a, uint32_t b, uint32_t c) {
  return ((uint64_t)a << 42) | ((uint64_t)b << 21) | c;
}

std::string coord_str(std::array<uint32_t, 3> k) {
  std::ostringstream os;
  os << "(" << k[0] << "," << k[1] << "," << k[2] << ")";
  return os.str();
}

}  // namespace

MMTensor mm_tensor(uint32_t m0, uint32_t n0, uint32_t p0) {
  require(m0 > 0 && n0 > 0 && p0 > 0, Errc::dimension_mismatch, "dims must be positive");
  MMTensor t{m0, n0, p0, {}};
  t.support.reserve((size_t)m0 * n0 * p0);
  for (uint32_t i = 0; i < m0; ++i)
    for (uint32_t j = 0; j < n0; ++j)
      for (uint32_t k = 0; k < p0; ++k)
        t.support.push_back({i * n0 + j, j * p0 + k, k * m0 + i});
  std::sort(t.support.begin(), t.support.end());
  return t;
}

SparseTensor expand_tensor(const BilinearAlgorithm& alg, size_t budget) {
  require(alg.U.ncols() < (1u << 21) && alg.V.ncols() < (1u << 21) && alg.W.ncols() < (1u << 21),
          Errc::dimension_mismatch, "tensor coordinates exceed packing range");
  size_t terms = 0;
  for (uint32_t r = 0; r < alg.t(); ++r) {
    terms += alg.U.row(r).size() * alg.V.row(r).size() * alg.W.row(r).size();
    require(terms <= budget, Errc::budget_exceeded,
            "expansion term budget exceeded; use randomized verification");
  }
  std::unordered_map<uint64_t, Rational> acc;
  acc.reserve(terms / 4 + 16);
  for (uint32_t r = 0; r < alg.t(); ++r) {
    auto u = alg.U.row(r), v = alg.V.row(r), w = alg.W.row(r);
    for (size_t a = 0; a < u.size(); ++a)
      for (size_t b = 0; b < v.size(); ++b) {
        Rational uv = u.vals[a] * v.vals[b];
        for (size_t c = 0; c < w.size(); ++c)
          acc[pack(u.cols[a], v.cols[b], w.cols[c])] += uv * w.vals[c];
      }
  }
  SparseTensor out{alg.U.ncols(), alg.V.ncols(), alg.W.ncols(), {}};
  out.entries.reserve(acc.size());
  for (auto& [k, q] : acc) {
    if (q.is_zero()) continue;
    out.entries.push_back(
        {{(uint32_t)(k >> 42), (uint32_t)((k >> 21) & 0x1FFFFF), (uint32_t)(k & 0x1FFFFF)},
         std::move(q)});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

VerifyReport verify_exact(const BilinearAlgorithm& alg, size_t budget) {
  alg.validate();
  VerifyReport rep;
  rep.mode = "exact";
  SparseTensor got = expand_tensor(alg, budget);
  MMTensor want = mm_tensor(alg.m, alg.n, alg.p);
  Rational one(1);
  size_t gi = 0;
  for (const auto& s : want.support) {
    if (gi < got.entries.size() && got.entries[gi].first < s) {
      rep.detail = "spurious tensor entry at " + coord_str(got.entries[gi].first) + " = " +
                   got.entries[gi].second.to_string();
      return rep;
    }
    if (gi >= got.entries.size() || got.entries[gi].first != s) {
      rep.detail = "missing tensor entry at " + coord_str(s);
      return rep;
    }
    if (got.entries[gi].second != one) {
      rep.detail = "coefficient at " + coord_str(s) + " is " + got.entries[gi].second.to_string();
      return rep;
    }
    ++gi;
  }
  if (gi < got.entries.size()) {
    rep.detail = "spurious tensor entry at " + coord_str(got.entries[gi].first) + " = " +
                 got.entries[gi].second.to_string();
    return rep;
  }
  rep.ok = true;
  return rep;
}

VerifyReport verify_brent(const BilinearAlgorithm& alg, size_t budget) {
  alg.validate();
  VerifyReport rep;
  rep.mode = "brent";
  size_t nu = alg.U.ncols(), nv = alg.V.ncols(), nw = alg.W.ncols();
  size_t eqs = nu * nv * nw;
  require(eqs * alg.t() <= budget, Errc::budget_exceeded,
          "sextuple budget exceeded; use randomized verification");
  std::vector<std::vector<Rational>> cu(nu, std::vector<Rational>(alg.t()));
  std::vector<std::vector<Rational>> cv(nv, std::vector<Rational>(alg.t()));
  std::vector<std::vector<Rational>> cw(nw, std::vector<Rational>(alg.t()));
  auto fill = [&](const SparseMatrix& M, std::vector<std::vector<Rational>>& cols) {
    for (uint32_t r = 0; r < M.nrows(); ++r) {
      auto rv = M.row(r);
      for (size_t k = 0; k < rv.size(); ++k) cols[rv.cols[k]][r] = rv.vals[k];
    }
  };
  fill(alg.U, cu);
  fill(alg.V, cv);
  fill(alg.W, cw);
  uint32_t m = alg.m, n = alg.n, p = alg.p;
  for (uint32_t a = 0; a < nu; ++a)
    for (uint32_t b = 0; b < nv; ++b)
      for (uint32_t c = 0; c < nw; ++c) {
        Rational s;
        for (uint32_t r = 0; r < alg.t(); ++r) s += cu[a][r] * cv[b][r] * cw[c][r];
        uint32_t i1 = a / n, j1 = a % n, i2 = b / p, j2 = b % p, i3 = c / m, j3 = c % m;
        bool want = (j1 == i2) && (j2 == i3) && (j3 == i1);
        if (s == Rational(want ? 1 : 0)) continue;
        std::ostringstream os;
        os << "sextuple ((" << i1 << "," << j1 << "),(" << i2 << "," << j2 << "),(" << i3 << ","
           << j3 << ")) = " << s.to_string() << ", expected " << (want ? 1 : 0);
        rep.detail = os.str();
        return rep;
      }
  rep.ok = true;
  return rep;
}

namespace {

// Rank-one probes A = x y^T, B = s t^T, C = g h^T. The trilinear defect is
// multilinear in (A, B, C), so vanishing on random rank-one triples is as
// strong as on dense ones, and tr(ABC) = (y.s)(t.g)(h.x) needs no product.
struct Rank1 {
  std::vector<uint64_t> x, y, s, t, g, h;
};

std::vector<uint64_t> sample_vec(const PrimeField& f, Rng& rng, size_t n) {
  std::vector<uint64_t> v(n);
  for (auto& e : v) e = f.sample(rng);
  return v;
}

Rank1 sample_rank1(const PrimeField& f, Rng& rng, uint32_t m, uint32_t n, uint32_t p) {
  return {sample_vec(f, rng, m), sample_vec(f, rng, n), sample_vec(f, rng, n),
          sample_vec(f, rng, p), sample_vec(f, rng, p), sample_vec(f, rng, m)};
}

uint64_t dot(const PrimeField& f, const std::vector<uint64_t>& a,
             const std::vector<uint64_t>& b) {
  uint64_t s = 0;
  for (size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

// M * vec(x y^T) without materializing the outer product.
std::vector<uint64_t> apply_outer(const PrimeField& f, const SparseMod& M,
                                  const std::vector<uint64_t>& x,
                                  const std::vector<uint64_t>& y) {
  size_t w = y.size();
  std::vector<uint64_t> out(M.nrows);
  for (uint32_t r = 0; r < M.nrows; ++r) {
    uint64_t acc = 0;
    for (size_t k = M.rowptr[r]; k < M.rowptr[r + 1]; ++k) {
      uint32_t c = M.col[k];
      acc = f.add(acc, f.mul(M.val[k], f.mul(x[c / w], y[c % w])));
    }
    out[r] = acc;
  }
  return out;
}

uint64_t hadamard_sum(const PrimeField& f, const std::vector<uint64_t>& u,
                      const std::vector<uint64_t>& v, const std::vector<uint64_t>& w) {
  uint64_t s = 0;
  for (size_t r = 0; r < u.size(); ++r) s = f.add(s, f.mul(f.mul(u[r], v[r]), w[r]));
  return s;
}

uint64_t rank1_trace(const PrimeField& f, const Rank1& o) {
  return f.mul(f.mul(dot(f, o.y, o.s), dot(f, o.t, o.g)), dot(f, o.h, o.x));
}

VerifyReport random_report(int trials, uint64_t prime, uint64_t seed) {
  VerifyReport rep;
  rep.mode = "random";
  rep.prime = prime;
  rep.trials = trials;
  rep.seed = seed;
  return rep;
}

void mismatch(VerifyReport& rep, int trial, uint64_t lhs, uint64_t rhs, uint64_t prime) {
  std::ostringstream os;
  os << "trial " << trial << ": trilinear value " << lhs << " != trace " << rhs << " mod "
     << prime;
  rep.detail = os.str();
}

}  // namespace

VerifyReport verify_random(const BilinearAlgorithm& alg, int trials, uint64_t prime,
                           uint64_t seed) {
  alg.validate();
  VerifyReport rep = random_report(trials, prime, seed);
  PrimeField f(prime);
  SparseMod mu = project(alg.U, f), mv = project(alg.V, f), mw = project(alg.W, f);
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Rank1 o = sample_rank1(f, rng, alg.m, alg.n, alg.p);
    uint64_t lhs = hadamard_sum(f, apply_outer(f, mu, o.x, o.y), apply_outer(f, mv, o.s, o.t),
                                apply_outer(f, mw, o.g, o.h));
    uint64_t rhs = rank1_trace(f, o);
    if (lhs != rhs) {
      mismatch(rep, t, lhs, rhs, prime);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

namespace {

// (shuffled kron of M1, M2) * vec(x y^T) without forming the product matrix.
// Z collects the M1-weighted b-operand blocks of x y^T; composed row (a, b)
// is then row b of M2 against Z. c1/r2/c2 are the operand grid sizes.
std::vector<uint64_t> apply_outer_pair(const PrimeField& f, const SparseMod& M1,
                                       const SparseMod& M2, uint32_t c1, uint32_t r2, uint32_t c2,
                                       const std::vector<uint64_t>& x,
                                       const std::vector<uint64_t>& y) {
  std::vector<uint64_t> out(static_cast<size_t>(M1.nrows) * M2.nrows);
  std::vector<uint64_t> z(static_cast<size_t>(r2) * c2);
  for (uint32_t a = 0; a < M1.nrows; ++a) {
    std::fill(z.begin(), z.end(), 0);
    for (size_t k = M1.rowptr[a]; k < M1.rowptr[a + 1]; ++k) {
      const uint32_t x1 = M1.col[k] / c1, y1 = M1.col[k] % c1;
      for (uint32_t x2 = 0; x2 < r2; ++x2) {
        const uint64_t xs = f.mul(M1.val[k], x[static_cast<size_t>(x1) * r2 + x2]);
        if (xs == 0) continue;
        uint64_t* zr = z.data() + static_cast<size_t>(x2) * c2;
        const uint64_t* yr = y.data() + static_cast<size_t>(y1) * c2;
        for (uint32_t y2 = 0; y2 < c2; ++y2) zr[y2] = f.add(zr[y2], f.mul(xs, yr[y2]));
      }
    }
    uint64_t* row = out.data() + static_cast<size_t>(a) * M2.nrows;
    for (uint32_t b = 0; b < M2.nrows; ++b) {
      uint64_t acc = 0;
      for (size_t k = M2.rowptr[b]; k < M2.rowptr[b + 1]; ++k)
        acc = f.add(acc, f.mul(M2.val[k], z[M2.col[k]]));
      row[b] = acc;
    }
  }
  return out;
}

}  // namespace

VerifyReport verify_random_composed(const BilinearAlgorithm& left, const BilinearAlgorithm& right,
                                    int trials, uint64_t prime, uint64_t seed) {
  left.validate();
  right.validate();
  VerifyReport rep = random_report(trials, prime, seed);
  PrimeField f(prime);
  SparseMod au = project(left.U, f), av = project(left.V, f), aw = project(left.W, f);
  SparseMod bu = project(right.U, f), bv = project(right.V, f), bw = project(right.W, f);
  Rng rng(seed);
  const uint32_t m = left.m * right.m, n = left.n * right.n, p = left.p * right.p;
  for (int t = 0; t < trials; ++t) {
    Rank1 o = sample_rank1(f, rng, m, n, p);
    uint64_t lhs = hadamard_sum(f, apply_outer_pair(f, au, bu, left.n, right.m, right.n, o.x, o.y),
                                apply_outer_pair(f, av, bv, left.p, right.n, right.p, o.s, o.t),
                                apply_outer_pair(f, aw, bw, left.m, right.p, right.m, o.g, o.h));
    uint64_t rhs = rank1_trace(f, o);
    if (lhs != rhs) {
      mismatch(rep, t, lhs, rhs, prime);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

VerifyReport verify_random(const DecomposedAlgorithm& alg, int trials, uint64_t prime,
                           uint64_t seed) {
  alg.validate();
  VerifyReport rep = random_report(trials, prime, seed);
  PrimeField f(prime);
  SparseMod mphi = project(alg.phi, f);
  SparseMod mu = project(alg.U_phi, f), mv = project(alg.V_phi, f), mw = project(alg.W_phi, f);
  Rng rng(seed);
  uint32_t n0 = alg.n0;
  for (int t = 0; t < trials; ++t) {
    Rank1 o = sample_rank1(f, rng, n0, n0, n0);
    uint64_t lhs = hadamard_sum(f, mu.apply(f, apply_outer(f, mphi, o.x, o.y)),
                                mv.apply(f, apply_outer(f, mphi, o.s, o.t)),
                                mw.apply(f, apply_outer(f, mphi, o.g, o.h)));
    uint64_t rhs = rank1_trace(f, o);
    if (lhs != rhs) {
      mismatch(rep, t, lhs, rhs, prime);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

VerifyReport verify_multiply(const BilinearAlgorithm& alg, int samples, int levels,
                             uint64_t seed) {
  alg.validate();
  VerifyReport rep;
  rep.mode = "multiply";
  rep.seed = seed;
  RationalDomain dom;
  Rng rng(seed);
  size_t ra = 1, ca = 1, cb = 1;
  for (int l = 0; l < levels; ++l) {
    ra *= alg.m;
    ca *= alg.n;
    cb *= alg.p;
  }
  for (int s = 0; s < samples; ++s) {
    QMatrix A(ra, ca), B(ca, cb);
    for (auto& x : A.a) x = dom.sample(rng);
    for (auto& x : B.a) x = dom.sample(rng);
    QMatrix got = recursive_multiply(dom, alg, A, B, levels);
    QMatrix want = naive_multiply(A, B);
    if (!(got == want)) {
      std::ostringstream os;
      os << "sample " << s << ": recursive product differs from naive at levels " << levels;
      rep.detail = os.str();
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

namespace {

Verification to_verification(const VerifyReport& r) {
  require(r.ok, Errc::verification, "cannot stamp a failed verification");
  Verification v;
  v.mode = r.mode;
  v.prime = r.prime;
  v.trials = r.trials;
  v.seed = r.seed;
  v.provenance = "verifier";
  return v;
}

}  // namespace

void stamp(BilinearAlgorithm& alg, const VerifyReport& r) { alg.verified = to_verification(r); }
void stamp(DecomposedAlgorithm& alg, const VerifyReport& r) { alg.verified = to_verification(r); }

}  // namespace tamm
