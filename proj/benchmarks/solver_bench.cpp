#include <benchmark/benchmark.h>

#include "adrflow/diagnostics.hpp"
#include "adrflow/problems.hpp"

namespace {

using namespace adrflow;

ProblemSpec desk_problem() {
  return problem_quad_quad(2.0, VectorN{1.0}, -0.5, VectorN{-1.0});
}

void BM_ApplyDr(benchmark::State& state) {
  const ProblemSpec problem = desk_problem();
  const DRParams params = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  VectorN x{0.7};
  for (auto _ : state) {
    x = apply_dr(problem.spec_a, problem.spec_b, params, x);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_ApplyDr);

void BM_Integrate(benchmark::State& state) {
  const ProblemSpec problem = desk_problem();
  const DRParams params = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  const auto theta = ThetaSchedule::constant(1.0, 1.0);
  const auto f = PerturbationSchedule::zero();
  const auto policy = StepPolicy::fixed_dt(0.5);
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto traj = integrate(problem.spec_a, problem.spec_b, params, theta, f, VectorN{0.0},
                          t_end, policy);
    benchmark::DoNotOptimize(traj.residuals.back());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Integrate)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_EstimateKappa(benchmark::State& state) {
  const ProblemSpec problem = desk_problem();
  const DRParams params = c2_params(2.0, -0.5, 0.5, 3.0, 0.5);
  const VectorN anchor =
      find_fixed_point(problem.spec_a, problem.spec_b, params, VectorN{0.0});
  for (auto _ : state) {
    auto est = estimate_kappa(problem.spec_a, problem.spec_b, params, anchor, 1.0,
                              static_cast<int>(state.range(0)), 42);
    benchmark::DoNotOptimize(est.kappa_hat);
  }
}
BENCHMARK(BM_EstimateKappa)->Arg(256)->Arg(1024);

void BM_ResolventAffine(benchmark::State& state) {
  const auto n = state.range(0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) * 2.0;
  const ProblemSpec problem = problem_affine(m, VectorN::zeros(n),
                                             Eigen::MatrixXd::Zero(n, n), VectorN::zeros(n));
  VectorN x = VectorN::zeros(n);
  for (auto _ : state) {
    x = resolvent(problem.spec_a, 1.0, x);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_ResolventAffine)->Arg(2)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
