// Parallel kernels against the serial reference path.
//   ./dgsl_bench --benchmark_filter=Bilinear
// Arguments: cells per side, polynomial degree.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "dgsl/analysis.hpp"
#include "dgsl/assembly.hpp"
#include "dgsl/linear_solver.hpp"
#include "dgsl/parallel.hpp"

namespace {

dgsl::DGSpace make_space(const benchmark::State& state) {
  auto mesh = std::make_shared<const dgsl::TriMesh>(dgsl::build_structured(state.range(0)));
  return dgsl::DGSpace(mesh, static_cast<int>(state.range(1)));
}

dgsl::DGVector random_field(const dgsl::DGSpace& space) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  dgsl::DGVector v(space);
  for (double& c : v.values()) c = unit(rng);
  return v;
}

void set_counters(benchmark::State& state, const dgsl::DGSpace& space) {
  state.counters["dofs"] = space.total_dofs();
  state.counters["threads"] = dgsl::max_threads();
}

void BM_BilinearParallel(benchmark::State& state) {
  const auto space = make_space(state);
  for (auto _ : state) benchmark::DoNotOptimize(dgsl::assemble_bilinear(space, {}));
  set_counters(state, space);
}

void BM_BilinearSerialReference(benchmark::State& state) {
  const auto space = make_space(state);
  for (auto _ : state) benchmark::DoNotOptimize(dgsl::reference::assemble_bilinear(space, {}));
  set_counters(state, space);
}

void BM_NonlinearLoadParallel(benchmark::State& state) {
  const auto space = make_space(state);
  const auto u = random_field(space);
  const auto problem = dgsl::sine_problem();
  for (auto _ : state)
    benchmark::DoNotOptimize(dgsl::assemble_nonlinear_load(space, u, problem, {}));
  set_counters(state, space);
}

void BM_NonlinearLoadSerialReference(benchmark::State& state) {
  const auto space = make_space(state);
  const auto u = random_field(space);
  const auto problem = dgsl::sine_problem();
  for (auto _ : state)
    benchmark::DoNotOptimize(dgsl::reference::assemble_nonlinear_load(space, u, problem, {}));
  set_counters(state, space);
}

void BM_Jacobian(benchmark::State& state) {
  const auto space = make_space(state);
  const auto u = random_field(space);
  const auto problem = dgsl::sine_problem();
  const auto a = dgsl::assemble_bilinear(space, {});
  for (auto _ : state)
    benchmark::DoNotOptimize(dgsl::assemble_jacobian(space, a, u, problem, {}));
  set_counters(state, space);
}

void BM_MatVec(benchmark::State& state) {
  const auto space = make_space(state);
  const auto a = dgsl::assemble_bilinear(space, {});
  const auto x = random_field(space);
  std::vector<double> y(x.size());
  for (auto _ : state) {
    a.multiply(x.values(), y);
    benchmark::DoNotOptimize(y.data());
  }
  set_counters(state, space);
}

void solve_with(benchmark::State& state, dgsl::Preconditioner preconditioner) {
  const auto space = make_space(state);
  const auto a = dgsl::assemble_bilinear(space, {});
  const auto b = random_field(space);
  dgsl::LinearSolveOptions opt;
  opt.preconditioner = preconditioner;
  int iterations = 0;
  for (auto _ : state) iterations = dgsl::solve_spd(a, b.values(), opt).report.iterations;
  set_counters(state, space);
  state.counters["cg_iters"] = iterations;
}

void BM_SolveBlockJacobi(benchmark::State& state) {
  solve_with(state, dgsl::Preconditioner::block_jacobi);
}

void BM_SolveCholesky(benchmark::State& state) { solve_with(state, dgsl::Preconditioner::cholesky); }

void BM_DGError(benchmark::State& state) {
  const auto space = make_space(state);
  const auto u = random_field(space);
  const auto exact = *dgsl::sine_problem().exact;
  for (auto _ : state) benchmark::DoNotOptimize(dgsl::dg_error(space, u, exact, 100.0));
  set_counters(state, space);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int r = 1; r <= 3; ++r)
    for (int n : {16, 32}) b->Args({n, r});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_BilinearParallel)->Apply(sizes);
BENCHMARK(BM_BilinearSerialReference)->Apply(sizes);
BENCHMARK(BM_NonlinearLoadParallel)->Apply(sizes);
BENCHMARK(BM_NonlinearLoadSerialReference)->Apply(sizes);
BENCHMARK(BM_Jacobian)->Apply(sizes);
BENCHMARK(BM_MatVec)->Apply(sizes);
BENCHMARK(BM_SolveBlockJacobi)->Apply(sizes);
BENCHMARK(BM_SolveCholesky)->Apply(sizes);
BENCHMARK(BM_DGError)->Apply(sizes);

BENCHMARK_MAIN();
