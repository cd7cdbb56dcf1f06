#include <random>

#include <benchmark/benchmark.h>

#include "qboson/fock.hpp"
#include "qboson/linalg.hpp"
#include "qboson/spectral.hpp"
#include "qboson/swanson.hpp"

using namespace qboson;

namespace {

QuadraticForm random_form(std::size_t K, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const auto n = static_cast<Eigen::Index>(2 * K);
  CMatrix G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) G(i, j) = G(j, i) = cplx{g(rng), g(rng)};
  return QuadraticForm(BosonBasis(K), G);
}

}  // namespace

static void BM_Decompose(benchmark::State& state) {
  const auto f = random_form(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f));
}
BENCHMARK(BM_Decompose)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

static void BM_ClassifyOneMode(benchmark::State& state) {
  const auto rep = adjoint_rep(swanson::one_mode({0.3, 0.5}));
  for (auto _ : state) benchmark::DoNotOptimize(classify_reality(rep));
}
BENCHMARK(BM_ClassifyOneMode);

static void BM_ComplexSchur(benchmark::State& state) {
  const auto H = adjoint_rep(random_form(static_cast<std::size_t>(state.range(0)), 11)).H;
  for (auto _ : state) benchmark::DoNotOptimize(linalg::complex_schur(H));
}
BENCHMARK(BM_ComplexSchur)->Arg(2)->Arg(8)->Arg(32);

static void BM_Expm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto Q = fock::assemble(swanson::generator_from_map(swanson::bogoliubov_map({0.3, 0.5}, 1.0)).form(),
                                {1, n, n});
  const RMatrix A = Q.real();
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm(A));
}
BENCHMARK(BM_Expm)->Arg(60)->Arg(240)->Unit(benchmark::kMillisecond);

static void BM_Logm(benchmark::State& state) {
  const CMatrix St = swanson::bogoliubov_map({0.3, 0.5}, 1.0).S.transpose();
  for (auto _ : state) benchmark::DoNotOptimize(linalg::logm(St));
}
BENCHMARK(BM_Logm);

static void BM_OracleOneMode(benchmark::State& state) {
  const auto f = swanson::one_mode({0.3, 0.5});
  const auto d = decompose(f);
  const fock::FockTruncation t{1, static_cast<std::size_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(fock::verify_spectrum(f, d, 5, t, 1e-6));
}
BENCHMARK(BM_OracleOneMode)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

static void BM_OracleTwoMode(benchmark::State& state) {
  const auto f = swanson::two_mode({0.1, 0.2, 0.3});
  const auto d = decompose(f);
  for (auto _ : state) benchmark::DoNotOptimize(fock::verify_spectrum(f, d, 4, {2, 20}, 1e-4));
}
BENCHMARK(BM_OracleTwoMode)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
