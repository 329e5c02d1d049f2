#include <benchmark/benchmark.h>

#include "qka/dual.hpp"
#include "qka/kernel.hpp"

namespace {

std::vector<double> draw(qka::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& a : v) a = 6.283185307179586 * qka::uniform01(rng);
  return v;
}

void BM_FeatureState(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto map = qka::covariant_map(q, qka::chain_edges(q));
  qka::Rng rng = qka::make_rng(1);
  const auto x = draw(rng, 2 * q);
  const std::vector<double> th{0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qka::prepare_feature_state(map, x, th));
}
BENCHMARK(BM_FeatureState)->DenseRange(2, 10, 2);

void BM_KernelEntry(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto map = qka::covariant_map(q, qka::chain_edges(q));
  qka::Rng rng = qka::make_rng(2);
  const auto x = draw(rng, 2 * q);
  const auto y = draw(rng, 2 * q);
  const std::vector<double> th{0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qka::kernel_value(map, x, y, th));
}
BENCHMARK(BM_KernelEntry)->DenseRange(2, 10, 2);

void BM_ComposedCircuit(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto map = qka::covariant_map(q, qka::chain_edges(q));
  qka::Rng rng = qka::make_rng(3);
  const auto x = draw(rng, 2 * q);
  const auto y = draw(rng, 2 * q);
  const std::vector<double> ta{0.3};
  const std::vector<double> tb{1.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(qka::composed_circuit_fidelity(map, x, ta, y, tb));
  }
}
BENCHMARK(BM_ComposedCircuit)->DenseRange(2, 10, 2);

void BM_GramMatrix(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto map = qka::covariant_map(4, qka::chain_edges(4));
  qka::Rng rng = qka::make_rng(4);
  std::vector<qka::DataVector> xs;
  for (std::size_t i = 0; i < m; ++i) xs.push_back(draw(rng, 8));
  const std::vector<double> th{0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qka::kernel_matrix(map, xs, th));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(m));
}
BENCHMARK(BM_GramMatrix)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_SolveDual(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto map = qka::covariant_map(4, qka::chain_edges(4));
  qka::Rng rng = qka::make_rng(5);
  std::vector<qka::DataVector> xs;
  std::vector<int> ys;
  for (std::size_t i = 0; i < m; ++i) {
    xs.push_back(draw(rng, 8));
    ys.push_back(qka::random_sign(rng));
  }
  const auto gram = qka::kernel_matrix(map, xs, std::vector<double>{0.3});
  for (auto _ : state) benchmark::DoNotOptimize(qka::solve_dual(gram, ys, 1.0));
}
BENCHMARK(BM_SolveDual)->RangeMultiplier(2)->Range(8, 64);

}  // namespace
