#include "qka/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qka {

double pseudo_kernel(const TrainableFeatureMap& map, std::span<const double> x,
                     std::span<const double> theta_a, std::span<const double> y,
                     std::span<const double> theta_b) {
  const StateVector a = prepare_feature_state(map, x, theta_a);
  const StateVector b = prepare_feature_state(map, y, theta_b);
  return fidelity(a, b);
}

double kernel_value(const TrainableFeatureMap& map, std::span<const double> x,
                    std::span<const double> y, std::span<const double> theta) {
  return pseudo_kernel(map, x, theta, y, theta);
}

double composed_circuit_fidelity(const TrainableFeatureMap& map, std::span<const double> x,
                                 std::span<const double> theta_a, std::span<const double> y,
                                 std::span<const double> theta_b) {
  StateVector state(map.num_qubits());
  map.apply(state, x, theta_a);
  map.apply_inverse(state, y, theta_b);
  return std::clamp(std::norm(state[0]), 0.0, 1.0);
}

KernelEstimate sample_all_zero(double p, std::size_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shot count must be at least 1");
  if (!std::isfinite(p)) throw std::invalid_argument("all-zero probability is not finite");
  p = std::clamp(p, 0.0, 1.0);
  std::binomial_distribution<std::uint64_t> draw(shots, p);
  const std::uint64_t count = draw(rng);
  return {static_cast<double>(count) / static_cast<double>(shots), shots, count};
}

KernelEstimate kernel_sampled(const TrainableFeatureMap& map, std::span<const double> x,
                              std::span<const double> theta_a, std::span<const double> y,
                              std::span<const double> theta_b, std::size_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shot count must be at least 1");
  return sample_all_zero(pseudo_kernel(map, x, theta_a, y, theta_b), shots, rng);
}

Matrix kernel_matrix(const TrainableFeatureMap& map, std::span<const DataVector> points,
                     std::span<const double> theta) {
  if (points.empty()) throw std::invalid_argument("kernel_matrix: empty point set");
  std::vector<StateVector> states;
  states.reserve(points.size());
  for (const auto& p : points) states.push_back(prepare_feature_state(map, p, theta));

  const std::size_t m = points.size();
  Matrix k(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = fidelity(states[i], states[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

KernelEvaluator::KernelEvaluator(std::size_t shots, std::uint64_t seed)
    : shots_(shots), rng_(make_rng(seed, 0x5407ULL)) {}

double KernelEvaluator::operator()(const StateVector& a, const StateVector& b) {
  const double p = fidelity(a, b);
  if (shots_ == 0) {
    ++counts_.exact;
    return p;
  }
  ++counts_.sampled;
  return sample_all_zero(p, shots_, rng_).value;
}

}  // namespace qka
