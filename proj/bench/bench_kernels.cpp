#include "robineit/factorization.hpp"
#include "robineit/forward_bie.hpp"
#include "robineit/forward_series.hpp"
#include "robineit/music.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace reit;

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_WMusic(benchmark::State& st) {
  auto f = music::make_response(music::synthetic_F({{-0.25, -0.25}, {0.25, 0.25}}, {1e-4, 1e-4}, 20));
  music::set_rank(f);
  const SamplingGrid grid;
  for (auto _ : st) benchmark::DoNotOptimize(music::W_music(f, grid, exec_of(st)));
}

void BM_WField(benchmark::State& st) {
  const BoundaryGrid boundary;
  const auto a = series::assemble_series_operator(boundary, series::SeriesCoefficients(0.5, 1.0, 10));
  const auto sys = fm::apply_noise(a.values, 0.05, 1);
  const SamplingGrid grid;
  for (auto _ : st)
    benchmark::DoNotOptimize(fm::W_field(sys, fm::Tikhonov{1e-7}, grid, boundary, exec_of(st)));
}

void BM_BieAssembly(benchmark::State& st) {
  const auto acorn = StarShaped::cosine(0.25, 0.15, 3, "acorn");
  const auto gamma = RobinCoefficient::inverse_exp_cos();
  const auto basis = FourierBasisSet::symmetric(30);
  for (auto _ : st)
    benchmark::DoNotOptimize(bie::assemble_bie(acorn, gamma, basis, BoundaryGrid(), 128, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_WMusic)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WField)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BieAssembly)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
