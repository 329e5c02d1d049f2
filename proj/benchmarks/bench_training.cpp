#include <benchmark/benchmark.h>

#include "qka/experiment.hpp"

namespace {

// Full Pegasos-QKA runs; the counter shows training kernel evaluations.
void BM_StationaryRun(benchmark::State& state) {
  auto c = qka::default_config(qka::ExperimentKind::Stationary);
  c.iterations = static_cast<std::size_t>(state.range(0));
  std::uint64_t kernels = 0;
  for (auto _ : state) {
    const auto r = qka::run_stationary(c);
    kernels = r.summary.training_kernels.total();
    benchmark::DoNotOptimize(r.summary.final_theta);
  }
  state.counters["kernels"] = static_cast<double>(kernels);
}
BENCHMARK(BM_StationaryRun)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_DriftRun(benchmark::State& state) {
  auto c = qka::default_config(qka::ExperimentKind::Drift);
  c.iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qka::run_drift(c).summary.tracking_error);
}
BENCHMARK(BM_DriftRun)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NestedBaseline(benchmark::State& state) {
  auto c = qka::default_config(qka::ExperimentKind::Stationary);
  const auto data = qka::make_datasets(c);
  const auto map = qka::covariant_map(c.qubits, data.spec.edges);
  for (auto _ : state) {
    qka::Rng rng = qka::make_rng(0, 4);
    qka::KernelEvaluator k;
    benchmark::DoNotOptimize(qka::nested_qka(map, data.train.points, 1.0, c.spsa,
                                             static_cast<std::size_t>(state.range(0)), {0.0}, rng, k));
  }
}
BENCHMARK(BM_NestedBaseline)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
