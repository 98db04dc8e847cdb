#pragma once

#include <cstdint>
#include <optional>

#include "tamm/algorithm.hpp"
#include "tamm/generate.hpp"
#include "tamm/verify.hpp"

namespace tamm {

// Squared family: the self-composition of a generated m0 x m0 factor, with
// every ordered pair of off-diagonal trace cells earmarked as a <4,4,4;49>
// block. Substituting a <4,4,4;t''> algorithm into those blocks removes
// (49 - t'') * h^2 multiplications. Kept in factored form; the composition
// is only materialized on demand.
struct Ta25bAlgorithm {
  uint32_t m0 = 0;
  GeneratedAlgorithm factor;
  std::optional<BilinearAlgorithm> replacement;

  uint32_t n0() const { return m0 * m0; }
  uint64_t h() const { return factor.cells.size(); }
  uint64_t blocks() const { return h() * h(); }
  uint64_t factor_rank() const { return factor.dec.t(); }
  uint64_t rank() const {
    const uint64_t t = factor_rank();
    const uint64_t tpp = replacement ? replacement->t() : 49;
    return t * t - (49 - tpp) * blocks();
  }
};

Ta25bAlgorithm gen_new25b(uint32_t m0);

// The replacement must be a <4,4,4> algorithm with at most 49 products; it
// is verified exactly here and rejected with Errc::verification otherwise.
Ta25bAlgorithm gen_new25b(uint32_t m0, BilinearAlgorithm replacement);

// Materializes compose(factor, factor), then substitutes every cell pair.
// Quadratic in the factor rank; meant for small m0.
BilinearAlgorithm expand(const Ta25bAlgorithm& alg);

// Streaming probabilistic tensor check against <n0,n0,n0>. Works row pair by
// row pair off the factored form and the 4x4 cell grams, so the composition
// is never materialized.
VerifyReport verify_random(const Ta25bAlgorithm& alg, int trials = 20,
                           uint64_t prime = kDefaultPrime, uint64_t seed = 1);

}  // namespace tamm
