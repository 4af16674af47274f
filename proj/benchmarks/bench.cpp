#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tfch/frac_kernels.hpp"
#include "tfch/solver.hpp"
#include "tfch/spectral.hpp"
#include "tfch/time_mesh.hpp"

using namespace tfch;

static void BM_KernelRow(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const TimeMesh mesh = TimeMesh::graded(1.0, n, 2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_kernel_row(mesh, n, 0.5));
  state.SetComplexityN(n);
}
BENCHMARK(BM_KernelRow)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_ApplyCaputo(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const TimeMesh mesh = TimeMesh::graded(1.0, n, 2.0);
  const KernelRow row = build_kernel_row(mesh, n, 0.5);
  std::vector<double> w(n, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_caputo(row, std::span<const double>(w)));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ApplyCaputo)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_Laplacian(benchmark::State& state) {
  const int M = state.range(0);
  const Grid2D g{M, M};
  Spectral sp(g);
  const Field2D f = random_uniform_field(g, -1.0, 1.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(sp.laplacian(f));
}
BENCHMARK(BM_Laplacian)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

static void BM_SolverStep(benchmark::State& state) {
  const int M = state.range(0);
  ModelParams p;
  p.alpha = 0.5;
  p.kappa = 0.01;
  p.eps = 0.05;
  p.grid = Grid2D{M, M};
  const Field2D phi0 = random_uniform_field(p.grid, -0.001, 0.001, 42);
  for (auto _ : state) {
    state.PauseTiming();
    FBDF2Solver s(p, TimeMesh::uniform(0.1, 10), phi0);
    state.ResumeTiming();
    s.run_to_mesh_end();
  }
}
BENCHMARK(BM_SolverStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
