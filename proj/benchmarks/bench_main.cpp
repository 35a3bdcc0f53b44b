#include <benchmark/benchmark.h>

#include <random>

#include "hcalg/algebra.hpp"
#include "hcalg/convolution.hpp"
#include "hcalg/densitysets.hpp"
#include "hcalg/shifts.hpp"
#include "hcalg/verify.hpp"
#include "hcalg/witnesses.hpp"

using namespace hcalg;

namespace {

TruncatedSeq dense_vec(Index n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeq x(2 * n);
  for (Index i = 0; i < n; ++i) x.set(i, XComplex(cplx(u(g), u(g))));
  return x;
}

void BM_CauchyProduct(benchmark::State& st) {
  auto x = dense_vec(st.range(0), 1), y = dense_vec(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(product(x, y, ProductKind::Cauchy));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_CauchyProduct)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_BackwardShift(benchmark::State& st) {
  auto w = WeightSeq::exp_n_alpha(0.5, 20000);
  auto x = dense_vec(st.range(0), 3);
  auto sp = SpaceSpec::lp(1);
  for (auto _ : st) benchmark::DoNotOptimize(apply_shift(w, x, st.range(0) / 2, Direction::Backward, &sp));
}
BENCHMARK(BM_BackwardShift)->RangeMultiplier(4)->Range(64, 4096);

void BM_Seminorm(benchmark::State& st) {
  auto x = dense_vec(st.range(0), 4);
  auto sp = SpaceSpec::entire(8);
  for (auto _ : st) benchmark::DoNotOptimize(seminorm(x, sp, 4));
}
BENCHMARK(BM_Seminorm)->Range(64, 8192);

void BM_DensityFamily(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(enforce_pairwise_gap(build_family_far(3, st.range(0)), {1, 2, 3}));
}
BENCHMARK(BM_DensityFamily)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_OrbitScan(benchmark::State& st) {
  auto w = WeightSeq::rolewicz(2.0, 12000);
  auto sp = SpaceSpec::lp(1);
  auto v = TruncatedSeq::basis(0, 0);
  auto W = build_ufhc_coordwise(1, 3, v, TruncatedSeq(0), w, sp, 5, 1, st.range(0) / 5 + 40);
  std::vector<OrbitTarget> t{{v.with_horizon(W.u.horizon()), 0.2, 1, "ball"}};
  for (auto _ : st)
    benchmark::DoNotOptimize(
        orbit_hit_density(w, W.u, Poly::power(1), t, st.range(0), 5, sp, ProductKind::Coordinatewise, 5));
}
BENCHMARK(BM_OrbitScan)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CoordwiseSearch(benchmark::State& st) {
  auto w = WeightSeq::rolewicz(2.0, 4096);
  auto sp = SpaceSpec::lp(1);
  std::vector<MultiIndex> A{{1, 0}, {0, 1}, {1, 1}};
  auto kb = kappa_beta_from(A, {1.0, 1.5});
  std::vector<TruncatedSeq> x{TruncatedSeq::from_values({0.3, 0.1}, 1), TruncatedSeq::from_values({0.2}, 0)};
  auto y = TruncatedSeq::from_values({1.0, 0.5, 0.25}, 2);
  for (auto _ : st) benchmark::DoNotOptimize(search_coordwise_nk(A, x, y, kb, w, sp, 1e-9, 1e-6, 2000));
}
BENCHMARK(BM_CoordwiseSearch)->Unit(benchmark::kMillisecond);

void BM_ConditionESearch(benchmark::State& st) {
  auto phi = PhiSpec::half_exp_plus_exp_i_minus_quarter(60);
  SearchConfig cfg;
  cfg.k_max = 3;
  for (auto _ : st) benchmark::DoNotOptimize(search_condition_e(phi, {1, 2, 3}, cfg));
}
BENCHMARK(BM_ConditionESearch)->Unit(benchmark::kMillisecond);

void BM_EigenRelation(benchmark::State& st) {
  auto phi = PhiSpec::half_exp_plus_exp_i_minus_quarter(60);
  for (auto _ : st) benchmark::DoNotOptimize(check_eigen_relation(phi, {1.0, -0.5}, st.range(0), 1.0, 1e-8));
}
BENCHMARK(BM_EigenRelation)->Arg(60)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
