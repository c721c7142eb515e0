#include <benchmark/benchmark.h>

#include "recon/fixtures.hpp"
#include "recon/hybrid.hpp"
#include "recon/kspace_interp.hpp"
#include "recon/tv.hpp"

using namespace recon;

namespace {

struct Problem {
  Image truth;
  Mask mask;
  Spectrum s;

  // r = 4 with a low-pass band of about N/8 rows
  explicit Problem(int n) : truth(shepp_logan(n)) {
    mask = build_mask(build_row_pattern(n, n, 4, n / 8 - 1, 2));
    s = apply_mask(dft2_centered(truth), mask);
  }
};

}  // namespace

static void BM_Dft2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexImage a = to_complex(shepp_logan(n));
  for (auto _ : state) benchmark::DoNotOptimize(dft2_centered(a));
}
BENCHMARK(BM_Dft2)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);

// Cost per iteration of the primal-dual loop.
static void BM_TvIterations(benchmark::State& state) {
  const Problem p(static_cast<int>(state.range(0)));
  TvParams params;
  params.iterations = 10;
  for (auto _ : state) benchmark::DoNotOptimize(tv_minimize(p.s, p.mask, params));
  state.SetItemsProcessed(state.iterations() * params.iterations);
}
BENCHMARK(BM_TvIterations)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Grappa(benchmark::State& state) {
  const Problem p(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grappa_reconstruct(p.s, p.mask));
}
BENCHMARK(BM_Grappa)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Hybrid(benchmark::State& state) {
  const Problem p(static_cast<int>(state.range(0)));
  const Image init = real_part(idft2_centered(p.s));
  HybridParams params;
  for (auto _ : state) benchmark::DoNotOptimize(hybrid_reconstruct(init, p.s, p.mask, params));
}
BENCHMARK(BM_Hybrid)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
