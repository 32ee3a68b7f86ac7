#include <benchmark/benchmark.h>

#include "kcoshj/integrate.hpp"
#include "kcoshj/problem.hpp"

using namespace kcoshj;

namespace {

struct Fixture {
  ProblemFile problem;
  CompiledProblem compiled;
  ReducedKVectorField z;

  Fixture()
      : problem(load_problem_text(find_builtin("scalar-field")->file_text, "bench")),
        compiled(compile_problem(problem)),
        z(reduce(compiled.system, compiled.section)) {}
};

void BM_IntegrateGrid(benchmark::State& state) {
  const Fixture f;
  GridSpec grid = f.problem.grid;
  const int steps = static_cast<int>(state.range(0));
  for (auto& s : grid.steps) s = steps;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_section(f.z, f.problem.initial_q, grid, {}, f.problem.integrator));
  }
  state.SetItemsProcessed(state.iterations() * grid.node_count());
}
BENCHMARK(BM_IntegrateGrid)->Arg(4)->Arg(8)->Arg(10);

void BM_HdwResidual(benchmark::State& state) {
  const Fixture f;
  GridSpec grid = f.problem.grid;
  const int steps = static_cast<int>(state.range(0));
  for (auto& s : grid.steps) s = steps;
  const GridSolution psi =
      integrate_section(f.z, f.problem.initial_q, grid, {}, f.problem.integrator);
  const PhaseMapGrid lifted = lift(f.compiled.section, psi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hdw_residual(lifted, f.compiled.system));
  }
  state.SetItemsProcessed(state.iterations() * grid.node_count());
}
BENCHMARK(BM_HdwResidual)->Arg(4)->Arg(8)->Arg(10);

void BM_HjResidualPoint(benchmark::State& state) {
  const Fixture f;
  const BasePoint pt(f.problem.dims, {0.1, 0.2, 0.3, 0.4}, {1.5});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hj_residual(f.compiled.section, f.compiled.system, pt));
  }
}
BENCHMARK(BM_HjResidualPoint);

}  // namespace

BENCHMARK_MAIN();
