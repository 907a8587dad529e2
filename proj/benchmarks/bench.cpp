// Microbenchmarks for the hot paths: forward solves and posterior
// evaluations per mesh level, system assembly, chain steps, and the
// streaming accumulator.

#include <benchmark/benchmark.h>

#include "bip/chain_stats.hpp"
#include "bip/mh_sampler.hpp"
#include "bip/posterior.hpp"
#include "bip/verify.hpp"

namespace {

void posterior_evaluation(benchmark::State& state) {
  const bip::Posterior posterior{bip::MeshLevel(int(state.range(0)))};
  auto evaluator = posterior.make_evaluator();
  const bip::ParameterVector theta = bip::inclusion_theta_hat();
  for (auto _ : state)
    benchmark::DoNotOptimize(evaluator.log_posterior(theta).log_posterior);
}
BENCHMARK(posterior_evaluation)->Arg(0)->Arg(1)->Arg(2);

void forward_solve(benchmark::State& state) {
  const bip::Posterior posterior{bip::MeshLevel(int(state.range(0)))};
  auto evaluator = posterior.make_evaluator();
  const bip::ParameterVector theta = bip::inclusion_theta_hat();
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.forward(theta));
}
BENCHMARK(forward_solve)->Arg(0)->Arg(1)->Arg(2);

void system_assembly(benchmark::State& state) {
  const bip::MeshLevel level(int(state.range(0)));
  const bip::ParameterVector theta = bip::inclusion_theta_hat();
  for (auto _ : state) benchmark::DoNotOptimize(bip::assemble(theta, level));
}
BENCHMARK(system_assembly)->Arg(0)->Arg(2);

void chain_step(benchmark::State& state) {
  const bip::Posterior posterior{bip::MeshLevel(int(state.range(0)))};
  bip::Chain chain(bip::posterior_target(posterior)(0), 0.0725,
                   bip::ParameterVector::Ones(), bip::Rng(1));
  for (auto _ : state) chain.step();
}
BENCHMARK(chain_step)->Arg(2);

void accumulator_push(benchmark::State& state) {
  bip::ChainAccumulator acc(bip::LagGrid{100, 201}, 32,
                            {{45, 46}, {53, 54}});
  bip::Rng rng(3);
  bip::ParameterVector theta;
  double xi[bip::kParameterCount];
  for (auto _ : state) {
    rng.gaussians(xi, bip::kParameterCount);
    for (int k = 0; k < bip::kParameterCount; ++k)
      theta[k] = std::exp(4.0 + 2.0 * xi[k]);
    acc.push(theta);
  }
}
BENCHMARK(accumulator_push);

}  // namespace

BENCHMARK_MAIN();
