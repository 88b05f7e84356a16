// Timings of the cosine transforms, the Poisson solve and one coupled step.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "stabflow/coupling.hpp"
#include "stabflow/problems.hpp"

using namespace stabflow;

namespace {

std::vector<double> sample_signal(int n) {
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) f[k] = std::sin(0.37 * k) + 0.1 * k;
  return f;
}

void dct_1d(benchmark::State& state, DctAlgorithm alg) {
  const int n = static_cast<int>(state.range(0));
  const DctPlan plan(n, alg);
  const auto f = sample_signal(n);
  std::vector<double> out(n);
  for (auto _ : state) {
    plan.forward(f.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(n);
}

void BM_DctNaive(benchmark::State& s) { dct_1d(s, DctAlgorithm::naive); }
void BM_DctIterative(benchmark::State& s) { dct_1d(s, DctAlgorithm::iterative); }
void BM_DctRecursive(benchmark::State& s) { dct_1d(s, DctAlgorithm::recursive); }
void BM_DctHybrid(benchmark::State& s) { dct_1d(s, DctAlgorithm::hybrid); }

void BM_PoissonSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PoissonSolver solver(n);
  CellField rhs(n);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i) rhs(i, j) = std::cos(3.0 * i / n) * std::sin(2.0 * j / n);
  for (auto _ : state) {
    auto u = solver.solve(rhs);
    benchmark::DoNotOptimize(u.values.data());
  }
}

void BM_DaeStepRock2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto prob = forced_flow(100.0);
  MomentumRhsConfig rc;
  rc.forcing_field = prob.forcing_field;
  const FlowSystem sys(GridSpec(n, 0.01), prob.boundary, rc);
  const auto u0 = sample_velocity(sys.spec(), prob.initial, 0.0);
  Stepper sp;
  sp.method = Method::rock2;
  sp.s = 5;
  for (auto _ : state) {
    state.PauseTiming();
    auto st = make_initial_state(sys, u0, CellField(n), 0.0);
    state.ResumeTiming();
    dae_step(sys, st, sp, 1e-3);
    benchmark::DoNotOptimize(st.u.data.data());
  }
}

}  // namespace

BENCHMARK(BM_DctNaive)->RangeMultiplier(2)->Range(16, 512)->Complexity();
BENCHMARK(BM_DctIterative)->RangeMultiplier(2)->Range(16, 512)->Complexity();
BENCHMARK(BM_DctRecursive)->RangeMultiplier(2)->Range(16, 512)->Complexity();
BENCHMARK(BM_DctHybrid)->RangeMultiplier(2)->Range(16, 512)->Complexity();
BENCHMARK(BM_PoissonSolve)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_DaeStepRock2)->Arg(32)->Arg(64);
BENCHMARK_MAIN();
