#include <benchmark/benchmark.h>

#include <cstdint>

#include "tamm/engine.hpp"
#include "tamm/generate.hpp"
#include "tamm/prime_field.hpp"
#include "tamm/rng.hpp"
#include "tamm/sparse.hpp"
#include "tamm/strassen.hpp"
#include "tamm/verify.hpp"

using namespace tamm;

namespace {

Dense<double> random_matrix(size_t n, uint64_t seed) {
  DoubleDomain dom;
  Rng rng(seed);
  Dense<double> m(n, n);
  for (auto& v : m.a) v = dom.sample(rng);
  return m;
}

const DecomposedAlgorithm& dec44() {
  static const DecomposedAlgorithm dec = gen_new25_decomposed(44);
  return dec;
}

const BilinearAlgorithm& merged20() {
  static const BilinearAlgorithm alg = gen_new25(20);
  return alg;
}

void BM_naive_double(benchmark::State& state) {
  const size_t n = state.range(0);
  DoubleDomain dom;
  Dense<double> A = random_matrix(n, 1), B = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(naive_multiply_domain(dom, A, B));
}
BENCHMARK(BM_naive_double)->Arg(32)->Arg(64)->Arg(128);

void BM_strassen_double(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  const size_t n = size_t(1) << levels;
  DoubleDomain dom;
  Dense<double> A = random_matrix(n, 1), B = random_matrix(n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(recursive_multiply(dom, strassen(), A, B, levels));
}
BENCHMARK(BM_strassen_double)->Arg(5)->Arg(6)->Arg(7);

void BM_strassen_hybrid(benchmark::State& state) {
  const int levels = 7;
  const size_t n = size_t(1) << levels;
  DoubleDomain dom;
  Dense<double> A = random_matrix(n, 1), B = random_matrix(n, 2);
  const int threshold = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(recursive_multiply(dom, strassen(), A, B, levels, threshold));
}
BENCHMARK(BM_strassen_hybrid)->Arg(8)->Arg(16)->Arg(32);

void BM_strassen_threads(benchmark::State& state) {
  const int levels = 7;
  const size_t n = size_t(1) << levels;
  DoubleDomain dom;
  Dense<double> A = random_matrix(n, 1), B = random_matrix(n, 2);
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(recursive_multiply(dom, strassen(), A, B, levels, 16, threads));
}
BENCHMARK(BM_strassen_threads)->Arg(1)->Arg(2)->Arg(4);

void BM_merged_base_double(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  size_t n = 1;
  for (int l = 0; l < levels; ++l) n *= 20;
  DoubleDomain dom;
  Dense<double> A = random_matrix(n, 1), B = random_matrix(n, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(recursive_multiply(dom, merged20(), A, B, levels));
}
BENCHMARK(BM_merged_base_double)->Arg(1)->Arg(2);

void BM_transform_apply(benchmark::State& state) {
  PrimeField f(kDefaultPrime);
  SparseMod phi = project(dec44().phi, f);
  Rng rng(3);
  std::vector<uint64_t> x(phi.ncols);
  for (auto& v : x) v = f.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(phi.apply(f, x));
}
BENCHMARK(BM_transform_apply);

void BM_encode_apply(benchmark::State& state) {
  PrimeField f(kDefaultPrime);
  SparseMod u = project(dec44().U_phi, f);
  Rng rng(3);
  std::vector<uint64_t> x(u.ncols);
  for (auto& v : x) v = f.sample(rng);
  for (auto _ : state) benchmark::DoNotOptimize(u.apply(f, x));
}
BENCHMARK(BM_encode_apply);

void BM_generate(benchmark::State& state) {
  const uint32_t n0 = static_cast<uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gen_new25(n0));
}
BENCHMARK(BM_generate)->Arg(20)->Arg(44);

void BM_verify_trial(benchmark::State& state) {
  uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(verify_random(merged20(), 1, kDefaultPrime, seed++));
}
BENCHMARK(BM_verify_trial);

}  // namespace

BENCHMARK_MAIN();
