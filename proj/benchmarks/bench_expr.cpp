#include <benchmark/benchmark.h>

#include <vector>

#include "kcoshj/expr.hpp"
#include "kcoshj/fields.hpp"

using namespace kcoshj;

namespace {

const char* kHamiltonianText = "(-p1_1^2 + p2_1^2 + p3_1^2 + p4_1^2)/2 - m^2*q1^2/2";

struct Fixture {
  Dimensions dims{4, 1};
  FieldPtr h;
  std::vector<double> env;

  Fixture() {
    ParamSet params;
    params.set("m", 1.0);
    h = make_expr_field(Expr::parse(kHamiltonianText, dims, params.names()), dims.phase_dim(),
                        params);
    env.assign(static_cast<std::size_t>(dims.phase_dim()), 0.5);
  }
};

void BM_ExprEval(benchmark::State& state) {
  const Fixture f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.h->value(f.env));
  }
}
BENCHMARK(BM_ExprEval);

void BM_ExprPartial(benchmark::State& state) {
  const Fixture f;
  const int coord = f.dims.p_index(0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.h->partial(f.env, coord));
  }
}
BENCHMARK(BM_ExprPartial);

void BM_ExprSecondPartial(benchmark::State& state) {
  const Fixture f;
  const int c1 = f.dims.p_index(0, 0);
  const int c2 = f.dims.q_index(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.h->partial2(f.env, c1, c2));
  }
}
BENCHMARK(BM_ExprSecondPartial);

void BM_Parse(benchmark::State& state) {
  const Dimensions dims(4, 1);
  const std::vector<std::string> params{"m"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(Expr::parse(kHamiltonianText, dims, params));
  }
}
BENCHMARK(BM_Parse);

}  // namespace

BENCHMARK_MAIN();
