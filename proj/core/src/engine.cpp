#include "tamm/engine.hpp"

namespace tamm {

namespace {

unsigned long long pow_checked(unsigned long long b, int e) {
  unsigned __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    require(r < ((unsigned __int128)1 << 63), Errc::domain, "operation count overflows");
  }
  return (unsigned long long)r;
}

// Linear ops of one application to a scalar vector: per-row adds plus
// non-singleton multiplications.
unsigned long long apply_cost(const SparseMatrix& M) {
  unsigned long long adds = 0;
  for (uint32_t r = 0; r < M.nrows(); ++r) {
    size_t k = M.row(r).size();
    if (k > 1) adds += k - 1;
  }
  return adds + M.nns();
}

// Same, for applying M^T (one output per column of M).
unsigned long long apply_cost_transposed(const SparseMatrix& M) {
  std::vector<uint32_t> cnt(M.ncols(), 0);
  for (uint32_t r = 0; r < M.nrows(); ++r) {
    auto rv = M.row(r);
    for (size_t k = 0; k < rv.size(); ++k) ++cnt[rv.cols[k]];
  }
  unsigned long long adds = 0;
  for (uint32_t c : cnt)
    if (c > 1) adds += c - 1;
  return adds + M.nns();
}

}  // namespace

OpCount count_operations(const BilinearAlgorithm& alg, int levels) {
  require(levels >= 1, Errc::dimension_mismatch, "levels must be >= 1");
  unsigned long long per_a = apply_cost(alg.U);
  unsigned long long per_b = apply_cost(alg.V);
  unsigned long long per_c = apply_cost_transposed(alg.W);
  unsigned long long linear = 0;
  for (int l = 1; l <= levels; ++l) {
    unsigned long long ea = pow_checked((unsigned long long)alg.m * alg.n, l - 1);
    unsigned long long eb = pow_checked((unsigned long long)alg.n * alg.p, l - 1);
    unsigned long long ec = pow_checked((unsigned long long)alg.p * alg.m, l - 1);
    linear = per_a * ea + per_b * eb + per_c * ec + alg.t() * linear;
  }
  return {pow_checked(alg.t(), levels), linear};
}

// Mirrors the factored execution: the basis change telescopes through the
// levels once per operand (s0-way branching over n0^2-sized block rows),
// while the core recursion pays the factored encodings on s0-long chunks.
OpCount count_operations(const DecomposedAlgorithm& alg, int levels) {
  require(levels >= 1, Errc::dimension_mismatch, "levels must be >= 1");
  unsigned long long enc =
      apply_cost(alg.U_phi) + apply_cost(alg.V_phi) + apply_cost_transposed(alg.W_phi);
  unsigned long long change = 2 * apply_cost(alg.phi) + apply_cost_transposed(alg.phi);
  unsigned long long core = 0, transform = 0;
  for (int l = 1; l <= levels; ++l) {
    core = enc * pow_checked(alg.s0(), l - 1) + alg.t() * core;
    transform =
        change * pow_checked((unsigned long long)alg.n0 * alg.n0, l - 1) + alg.s0() * transform;
  }
  return {pow_checked(alg.t(), levels), core + transform};
}

}  // namespace tamm
