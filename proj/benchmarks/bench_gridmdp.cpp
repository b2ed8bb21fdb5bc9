#include <benchmark/benchmark.h>

#include "gridmdp/analysis.hpp"
#include "gridmdp/devices.hpp"
#include "gridmdp/price_process.hpp"
#include "gridmdp/solvers.hpp"

namespace {

using namespace gridmdp;

PriceChain reference_chain() {
  return build_birth_death_chain({1.0, 1.25, 1.5, 1.75, 2.0}, 0.5, 0.3);
}

MdpModel reference_thermostat(const PriceChain& chain, int levels) {
  DeviceSpec spec;
  ControlLoadParams params;
  params.num_temperature_levels = levels;
  spec.params = params;
  return build_control_load(spec, chain);
}

void BM_BuildDevice(benchmark::State& state) {
  const PriceChain chain = reference_chain();
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference_thermostat(chain, levels));
  }
}
BENCHMARK(BM_BuildDevice)->Arg(10)->Arg(40)->Arg(160);

// The argument is the discount factor in thousandths; higher gamma means a
// slower contraction and many more sweeps.
void BM_ValueIteration(benchmark::State& state) {
  const PriceChain chain = reference_chain();
  const MdpModel model = reference_thermostat(chain, 10);
  const double gamma = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(value_iteration(model, gamma));
  }
}
BENCHMARK(BM_ValueIteration)->Arg(900)->Arg(990)->Arg(999);

void BM_PolicyIteration(benchmark::State& state) {
  const PriceChain chain = reference_chain();
  const MdpModel model = reference_thermostat(chain, 10);
  const double gamma = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(policy_iteration(model, gamma));
  }
}
BENCHMARK(BM_PolicyIteration)->Arg(900)->Arg(990)->Arg(999);

void BM_StationaryDistribution(benchmark::State& state) {
  const PriceChain chain = reference_chain();
  const MdpModel model = reference_thermostat(chain, static_cast<int>(state.range(0)));
  const SolveResult solved = value_iteration(model, 0.99);
  const Eigen::MatrixXd m = induced_chain(model, solved.policy);
  const Distribution initial = Distribution::uniform(model.num_states());
  for (auto _ : state) {
    benchmark::DoNotOptimize(stationary_distribution(m, initial, 1e-10, 1'000'000));
  }
}
BENCHMARK(BM_StationaryDistribution)->Arg(10)->Arg(40);

void BM_SimulateTrajectory(benchmark::State& state) {
  const PriceChain chain = reference_chain();
  const MdpModel model = reference_thermostat(chain, 10);
  const SolveResult solved = value_iteration(model, 0.99);
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_trajectory(model, solved.policy, steps, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_SimulateTrajectory)->Arg(1 << 14)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
