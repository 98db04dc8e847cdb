#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>

#include "tamm/algorithm.hpp"
#include "tamm/dense.hpp"
#include "tamm/prime_field.hpp"
#include "tamm/rng.hpp"

namespace tamm {

// Scalar domains for recursive execution. A domain supplies the arithmetic,
// conversion from the algorithm's rational coefficients, and sampling for
// differential tests.
struct RationalDomain {
  using value_type = Rational;
  Rational zero() const { return Rational(); }
  Rational from_rational(const Rational& q) const { return q; }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  bool is_zero(const Rational& a) const { return a.is_zero(); }
  Rational sample(Rng& rng) const { return Rational(rng.int_in(-4, 4)); }
};

struct PrimeDomain {
  PrimeField f;
  using value_type = uint64_t;
  uint64_t zero() const { return 0; }
  uint64_t from_rational(const Rational& q) const { return f.project(q); }
  uint64_t add(uint64_t a, uint64_t b) const { return f.add(a, b); }
  uint64_t mul(uint64_t a, uint64_t b) const { return f.mul(a, b); }
  bool is_zero(uint64_t a) const { return a == 0; }
  uint64_t sample(Rng& rng) const { return f.sample(rng); }
};

struct DoubleDomain {
  using value_type = double;
  double zero() const { return 0.0; }
  double from_rational(const Rational& q) const { return q.to_double(); }
  double add(double a, double b) const { return a + b; }
  double mul(double a, double b) const { return a * b; }
  bool is_zero(double a) const { return a == 0.0; }
  double sample(Rng& rng) const { return (double)rng.int_in(-1000, 1000) / 1000.0; }
};

namespace detail {

template <class D>
Dense<typename D::value_type> naive_product_transposed(const D& dom,
                                                       const Dense<typename D::value_type>& A,
                                                       const Dense<typename D::value_type>& B) {
  Dense<typename D::value_type> ct(B.cols, A.rows);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t k = 0; k < A.cols; ++k) {
      const auto& a = A.at(i, k);
      if (dom.is_zero(a)) continue;
      for (size_t j = 0; j < B.cols; ++j)
        ct.at(j, i) = dom.add(ct.at(j, i), dom.mul(a, B.at(k, j)));
    }
  return ct;
}

template <class T>
std::vector<Dense<T>> split_blocks(const Dense<T>& A, uint32_t grid_r, uint32_t grid_c) {
  size_t br = A.rows / grid_r, bc = A.cols / grid_c;
  std::vector<Dense<T>> out;
  out.reserve((size_t)grid_r * grid_c);
  for (uint32_t i = 0; i < grid_r; ++i)
    for (uint32_t j = 0; j < grid_c; ++j) {
      Dense<T> b(br, bc);
      for (size_t r = 0; r < br; ++r)
        for (size_t c = 0; c < bc; ++c) b.at(r, c) = A.at(i * br + r, j * bc + c);
      out.push_back(std::move(b));
    }
  return out;
}

template <class D>
void add_scaled(const D& dom, Dense<typename D::value_type>& dst,
                const Dense<typename D::value_type>& src, const typename D::value_type& s) {
  for (size_t i = 0; i < dst.a.size(); ++i) dst.a[i] = dom.add(dst.a[i], dom.mul(s, src.a[i]));
}

template <class F>
void run_indexed(uint32_t n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (uint32_t r = 0; r < n; ++r) f(r);
    return;
  }
  std::atomic<uint32_t> next{0};
  std::atomic<bool> bail{false};
  std::exception_ptr ep;
  std::mutex mu;
  auto worker = [&] {
    try {
      for (uint32_t r; (r = next.fetch_add(1)) < n && !bail.load();) f(r);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!ep) ep = std::current_exception();
      bail.store(true);
    }
  };
  std::vector<std::thread> pool;
  int used = threads < (int)n ? threads : (int)n;
  pool.reserve(used);
  for (int i = 0; i < used; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (ep) std::rethrow_exception(ep);
}

template <class D>
Dense<typename D::value_type> combine_row(const D& dom, const SparseMatrix& M, uint32_t r,
                                          const std::vector<Dense<typename D::value_type>>& blocks,
                                          size_t br, size_t bc) {
  Dense<typename D::value_type> acc(br, bc);
  auto rv = M.row(r);
  for (size_t k = 0; k < rv.size(); ++k)
    add_scaled(dom, acc, blocks[rv.cols[k]], dom.from_rational(rv.vals[k]));
  return acc;
}

// Returns (A*B)^T; recursion keeps the transposed decode convention so the
// W^T pass is a plain block accumulation at every level.
//
// threads > 1 parallelizes the top-level sub-products only; the decode
// accumulation stays sequential in row order, so results (including
// floating-point ones) match the single-threaded run bit for bit.
template <class D>
Dense<typename D::value_type> mult_transposed(const D& dom, const BilinearAlgorithm& alg,
                                              const Dense<typename D::value_type>& A,
                                              const Dense<typename D::value_type>& B, int levels,
                                              int base_threshold, int threads = 1) {
  if (levels <= base_threshold || levels == 0) return naive_product_transposed(dom, A, B);
  using T = typename D::value_type;
  auto ba = split_blocks(A, alg.m, alg.n);
  auto bb = split_blocks(B, alg.n, alg.p);
  size_t ar = A.rows / alg.m, ac = A.cols / alg.n, bc = B.cols / alg.p;
  std::vector<Dense<T>> ct((size_t)alg.p * alg.m, Dense<T>(bc, ar));
  auto product = [&](uint32_t r) {
    Dense<T> ta = combine_row(dom, alg.U, r, ba, ar, ac);
    Dense<T> tb = combine_row(dom, alg.V, r, bb, ac, bc);
    return mult_transposed(dom, alg, ta, tb, levels - 1, base_threshold);
  };
  std::vector<Dense<T>> pts;
  if (threads > 1) {
    pts.resize(alg.t());
    run_indexed(alg.t(), threads, [&](uint32_t r) { pts[r] = product(r); });
  }
  for (uint32_t r = 0; r < alg.t(); ++r) {
    Dense<T> pt = threads > 1 ? std::move(pts[r]) : product(r);
    auto wv = alg.W.row(r);
    for (size_t k = 0; k < wv.size(); ++k)
      add_scaled(dom, ct[wv.cols[k]], pt, dom.from_rational(wv.vals[k]));
  }
  Dense<T> C(B.cols, A.rows);
  for (uint32_t i = 0; i < alg.p; ++i)
    for (uint32_t j = 0; j < alg.m; ++j)
      for (size_t r = 0; r < bc; ++r)
        for (size_t c = 0; c < ar; ++c)
          C.at(i * bc + r, j * ar + c) = ct[(size_t)i * alg.m + j].at(r, c);
  return C;
}

// Forward basis change: split into n0 x n0 blocks, apply the phi rows, then
// recurse into each image block. Emits s0^levels base blocks depth first.
template <class D>
void phi_forward(const D& dom, const SparseMatrix& phi, uint32_t n0,
                 const Dense<typename D::value_type>& M, int levels,
                 std::vector<Dense<typename D::value_type>>& out) {
  if (levels == 0) {
    out.push_back(M);
    return;
  }
  size_t sub = M.rows / n0;
  auto blocks = split_blocks(M, n0, n0);
  for (uint32_t s = 0; s < phi.nrows(); ++s)
    phi_forward(dom, phi, n0, combine_row(dom, phi, s, blocks, sub, sub), levels - 1, out);
}

// Core recursion on transformed coordinates: a and b point at s0^levels base
// blocks laid out depth first; the factored encodings combine whole chunks
// of s0^(levels-1) blocks. The result stays in the transformed basis.
template <class D>
std::vector<Dense<typename D::value_type>> transformed_products(
    const D& dom, const DecomposedAlgorithm& alg, const Dense<typename D::value_type>* a,
    const Dense<typename D::value_type>* b, int levels, int threads = 1) {
  using T = typename D::value_type;
  if (levels == 0) return {naive_product_transposed(dom, *a, *b)};
  size_t chunk = 1;
  for (int i = 1; i < levels; ++i) chunk *= alg.s0();
  auto slice = [&](const SparseMatrix& M, uint32_t r, const Dense<T>* src) {
    std::vector<Dense<T>> acc(chunk, Dense<T>(src[0].rows, src[0].cols));
    auto rv = M.row(r);
    for (size_t k = 0; k < rv.size(); ++k) {
      T c = dom.from_rational(rv.vals[k]);
      for (size_t j = 0; j < chunk; ++j)
        add_scaled(dom, acc[j], src[(size_t)rv.cols[k] * chunk + j], c);
    }
    return acc;
  };
  auto product = [&](uint32_t r) {
    auto ta = slice(alg.U_phi, r, a);
    auto tb = slice(alg.V_phi, r, b);
    return transformed_products(dom, alg, ta.data(), tb.data(), levels - 1);
  };
  std::vector<std::vector<Dense<T>>> pts;
  if (threads > 1) {
    pts.resize(alg.t());
    run_indexed(alg.t(), threads, [&](uint32_t r) { pts[r] = product(r); });
  }
  std::vector<Dense<T>> y((size_t)alg.s0() * chunk, Dense<T>(b[0].cols, a[0].rows));
  for (uint32_t r = 0; r < alg.t(); ++r) {
    std::vector<Dense<T>> pt = threads > 1 ? std::move(pts[r]) : product(r);
    auto wv = alg.W_phi.row(r);
    for (size_t k = 0; k < wv.size(); ++k) {
      T c = dom.from_rational(wv.vals[k]);
      for (size_t j = 0; j < chunk; ++j)
        add_scaled(dom, y[(size_t)wv.cols[k] * chunk + j], pt[j], c);
    }
  }
  return y;
}

// Inverse basis change: undo phi_forward deepest level first, then apply
// phi^T once on top and reassemble the block matrix.
template <class D>
Dense<typename D::value_type> phi_backward(const D& dom, const SparseMatrix& phi, uint32_t n0,
                                           const Dense<typename D::value_type>* y, int levels) {
  using T = typename D::value_type;
  if (levels == 0) return *y;
  size_t chunk = 1;
  for (int i = 1; i < levels; ++i) chunk *= phi.nrows();
  std::vector<Dense<T>> blocks;
  blocks.reserve(phi.nrows());
  for (uint32_t s = 0; s < phi.nrows(); ++s)
    blocks.push_back(phi_backward(dom, phi, n0, y + (size_t)s * chunk, levels - 1));
  size_t sub = blocks[0].rows;
  std::vector<Dense<T>> ct((size_t)n0 * n0, Dense<T>(sub, sub));
  for (uint32_t s = 0; s < phi.nrows(); ++s) {
    auto pv = phi.row(s);
    for (size_t k = 0; k < pv.size(); ++k)
      add_scaled(dom, ct[pv.cols[k]], blocks[s], dom.from_rational(pv.vals[k]));
  }
  Dense<T> C((size_t)n0 * sub, (size_t)n0 * sub);
  for (uint32_t i = 0; i < n0; ++i)
    for (uint32_t j = 0; j < n0; ++j)
      for (size_t r = 0; r < sub; ++r)
        for (size_t c = 0; c < sub; ++c)
          C.at(i * sub + r, j * sub + c) = ct[(size_t)i * n0 + j].at(r, c);
  return C;
}

// Factored execution changes basis once: both operands go through phi across
// all recursion levels up front, the core recursion runs entirely on
// transformed coordinates, and one phi^T pass brings the result back. That
// amortization is the point of the factored form; re-applying phi inside
// every sub-product would repeat it t0 times per level instead of s0. The
// price is memory: s0^levels transformed coordinates per operand.
template <class D>
Dense<typename D::value_type> mult_transposed(const D& dom, const DecomposedAlgorithm& alg,
                                              const Dense<typename D::value_type>& A,
                                              const Dense<typename D::value_type>& B, int levels,
                                              int base_threshold, int threads = 1) {
  if (levels <= base_threshold || levels == 0) return naive_product_transposed(dom, A, B);
  using T = typename D::value_type;
  int depth = levels - (base_threshold > 0 ? base_threshold : 0);
  std::vector<Dense<T>> ta, tb;
  phi_forward(dom, alg.phi, alg.n0, A, depth, ta);
  phi_forward(dom, alg.phi, alg.n0, B, depth, tb);
  std::vector<Dense<T>> y = transformed_products(dom, alg, ta.data(), tb.data(), depth, threads);
  return phi_backward(dom, alg.phi, alg.n0, y.data(), depth);
}

inline std::array<uint32_t, 3> base_dims(const BilinearAlgorithm& alg) {
  return {alg.m, alg.n, alg.p};
}
inline std::array<uint32_t, 3> base_dims(const DecomposedAlgorithm& alg) {
  return {alg.n0, alg.n0, alg.n0};
}

inline void check_operand_shape(const std::array<uint32_t, 3>& dims, int levels, size_t ar,
                                size_t ac, size_t br, size_t bc) {
  uint64_t em = 1, en = 1, ep = 1;
  for (int l = 0; l < levels; ++l) {
    em *= dims[0];
    en *= dims[1];
    ep *= dims[2];
    require(em <= (1u << 26) && en <= (1u << 26) && ep <= (1u << 26), Errc::dimension_mismatch,
            "operand dimensions overflow at the requested level count");
  }
  require(ar == em && ac == en && br == en && bc == ep, Errc::dimension_mismatch,
          "operands must be m0^levels x n0^levels and n0^levels x p0^levels");
}

}  // namespace detail

template <class D, class Alg>
Dense<typename D::value_type> recursive_multiply(const D& dom, const Alg& alg,
                                                 const Dense<typename D::value_type>& A,
                                                 const Dense<typename D::value_type>& B,
                                                 int levels, int base_threshold = 0,
                                                 int threads = 1) {
  require(levels >= 1, Errc::dimension_mismatch, "levels must be >= 1");
  detail::check_operand_shape(detail::base_dims(alg), levels, A.rows, A.cols, B.rows, B.cols);
  return detail::mult_transposed(dom, alg, A, B, levels, base_threshold, threads).transposed();
}

template <class D>
Dense<typename D::value_type> naive_multiply_domain(const D& dom,
                                                    const Dense<typename D::value_type>& A,
                                                    const Dense<typename D::value_type>& B) {
  return detail::naive_product_transposed(dom, A, B).transposed();
}

struct OpCount {
  unsigned long long multiplications = 0;
  unsigned long long linear = 0;
};

OpCount count_operations(const BilinearAlgorithm& alg, int levels);
OpCount count_operations(const DecomposedAlgorithm& alg, int levels);

}  // namespace tamm
