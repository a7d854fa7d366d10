// Microbenchmarks for the hot paths: collocated nonlinearities, shifted
// factorizations, mode-wise resolvent solves, and a full corrector call.
#include <benchmark/benchmark.h>

#include "hopfkit/conditions.hpp"
#include "hopfkit/continuation.hpp"
#include "hopfkit/example1.hpp"
#include "hopfkit/example2.hpp"

namespace {

using namespace hopfkit;

const Example1Problem& ex1() {
  static auto P = [] {
    auto p = ex1_build({});
    prepare_bordering(*p);
    return p;
  }();
  return *P;
}

const Example2Problem& ex2() {
  static auto P = [] {
    auto p = ex2_build({});
    prepare_bordering(*p);
    return p;
  }();
  return *P;
}

SpaceTimeField sample_field(const EvolutionProblem& P, int nt) {
  SpaceTimeField u = 0.2 * P.u_star(nt);
  u.cos_coeff(3) = 0.01 * u.cos_coeff(1);
  return u;
}

void BM_ResidualExample2(benchmark::State& state) {
  const auto& P = ex2();
  ExtendedState s{0.04, 0.0, sample_field(P, 8)};
  for (auto _ : state) benchmark::DoNotOptimize(residual_g(P, s));
}
BENCHMARK(BM_ResidualExample2);

void BM_ResidualExample1(benchmark::State& state) {
  const auto& P = ex1();
  ExtendedState s{0.04, 0.0, sample_field(P, 8)};
  for (auto _ : state) benchmark::DoNotOptimize(residual_g(P, s));
}
BENCHMARK(BM_ResidualExample1);

void BM_ShiftedFactorExample1(benchmark::State& state) {
  const auto& P = ex1();
  for (auto _ : state) benchmark::DoNotOptimize(P.shifted(Complex(0.0, 2.0)));
}
BENCHMARK(BM_ShiftedFactorExample1);

void BM_ResolventSolveExample2(benchmark::State& state) {
  const auto& P = ex2();
  auto op = P.shifted(Complex(0.0, 3.0));
  SpatialVectorC rhs = SpatialVectorC::Ones(P.dim());
  for (auto _ : state) benchmark::DoNotOptimize(op->solve(rhs));
}
BENCHMARK(BM_ResolventSolveExample2);

void BM_SigmaMinExample1(benchmark::State& state) {
  const auto& P = ex1();
  for (auto _ : state)
    benchmark::DoNotOptimize(P.shifted_singular_values(Complex(0.0, 4.0), 1));
}
BENCHMARK(BM_SigmaMinExample1);

void BM_CorrectorStepExample2(benchmark::State& state) {
  const auto& P = ex2();
  CorrectorOptions opts;
  BranchPoint guess = exact_branch(P, 0.09);
  guess.u = (0.1 / 0.09) * guess.u;  // slightly off so the corrector iterates
  guess.alpha = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(corrector(P, 0.1, guess, opts));
}
BENCHMARK(BM_CorrectorStepExample2);

void BM_TranslateField(benchmark::State& state) {
  SpaceTimeField u = sample_field(ex1(), 8);
  for (auto _ : state) benchmark::DoNotOptimize(translate(u, 0.7));
}
BENCHMARK(BM_TranslateField);

}  // namespace

BENCHMARK_MAIN();
