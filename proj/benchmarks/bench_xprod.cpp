#include <benchmark/benchmark.h>

#include <random>

#include "support/fixtures.hpp"
#include "xprod/ckalg.hpp"
#include "xprod/crossalg.hpp"
#include "xprod/dynsys_ext.hpp"
#include "xprod/regrep.hpp"

using namespace xprod;
namespace fx = xprod::testing;

namespace {

void BM_CrossMulFunalg(benchmark::State& state) {
  const BackendPtr B = fx::tail_cycle_backend();
  std::mt19937_64 rng(1);
  const int deg = static_cast<int>(state.range(0));
  const auto x = cross::random_crossed(B, rng, deg);
  const auto y = cross::random_crossed(B, rng, deg);
  for (auto _ : state) benchmark::DoNotOptimize(cross::cross_mul(x, y));
}
BENCHMARK(BM_CrossMulFunalg)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_CrossMulCK(benchmark::State& state) {
  const BackendPtr B = std::make_shared<const ck::CKBackend>(fx::full2(), 8);
  std::mt19937_64 rng(2);
  const int level = static_cast<int>(state.range(0));
  const auto x = cross::random_crossed(B, rng, 1, level);
  const auto y = cross::random_crossed(B, rng, 1, level);
  for (auto _ : state) benchmark::DoNotOptimize(cross::cross_mul(x, y));
}
BENCHMARK(BM_CrossMulCK)->Arg(0)->Arg(2)->Arg(4)->Arg(6);

void BM_NormEstimate(benchmark::State& state) {
  const BackendPtr B = fx::chain3_backend();
  std::mt19937_64 rng(3);
  const auto x = cross::random_crossed(B, rng, 2);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cross::norm_estimate(x, k));
}
BENCHMARK(BM_NormEstimate)->DenseRange(1, 5);

void BM_OrbitPoints(benchmark::State& state) {
  const auto X = fx::points(2);
  const dynsys::ReversibleExtension ext(X, fx::collapse2(X));
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ext.orbit_points(depth));
}
BENCHMARK(BM_OrbitPoints)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_CKDelta(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const ck::CKBackend B(fx::full2(), level + 1);
  std::mt19937_64 rng(4);
  const auto x = B.random_element(rng, level);
  for (auto _ : state) benchmark::DoNotOptimize(B.structure().ck_delta(x));
}
BENCHMARK(BM_CKDelta)->DenseRange(1, 7, 2);

void BM_AFStructureBuild(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ck::AFStructure(fx::full2(), level));
}
BENCHMARK(BM_AFStructureBuild)->DenseRange(2, 8, 2);

void BM_TruncatedRep(benchmark::State& state) {
  const int window = static_cast<int>(state.range(0));
  const BackendPtr B = std::make_shared<const ck::CKBackend>(fx::upper2(), regrep::required_level(window, 4));
  const auto f = B->functionals().front();
  for (auto _ : state) benchmark::DoNotOptimize(regrep::TruncatedRep(B, f, window, 4).dimension());
}
BENCHMARK(BM_TruncatedRep)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
