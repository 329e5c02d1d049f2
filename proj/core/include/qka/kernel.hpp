#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qka/feature_map.hpp"
#include "qka/random.hpp"
#include "qka/statevector.hpp"

namespace qka {

using DataVector = std::vector<double>;

/// A data vector with its label in {-1, +1}.
struct LabeledPoint {
  DataVector x;
  int y = 1;
};

/// Frequency of the all-zero outcome over `shots` repetitions. shots == 0
/// marks an exact value.
struct KernelEstimate {
  double value = 0.0;
  std::size_t shots = 0;
  std::uint64_t all_zero_count = 0;
};

/// Row-major dense matrix, enough for Gram matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// |<psi_{theta_a}(x) | psi_{theta_b}(y)>|^2 via two state preparations.
double pseudo_kernel(const TrainableFeatureMap& map, std::span<const double> x,
                     std::span<const double> theta_a, std::span<const double> y,
                     std::span<const double> theta_b);

/// Plain fidelity kernel k_theta(x, y).
double kernel_value(const TrainableFeatureMap& map, std::span<const double> x,
                    std::span<const double> y, std::span<const double> theta);

/// All-zero probability of E(y, theta_b)^dagger E(x, theta_a) |0>, i.e. the
/// circuit that hardware would measure. Independent code path from
/// pseudo_kernel.
double composed_circuit_fidelity(const TrainableFeatureMap& map, std::span<const double> x,
                                 std::span<const double> theta_a, std::span<const double> y,
                                 std::span<const double> theta_b);

/// Binomial(shots, p) all-zero count for a known exact probability p.
KernelEstimate sample_all_zero(double p, std::size_t shots, Rng& rng);

KernelEstimate kernel_sampled(const TrainableFeatureMap& map, std::span<const double> x,
                              std::span<const double> theta_a, std::span<const double> y,
                              std::span<const double> theta_b, std::size_t shots, Rng& rng);

/// K_ij = k_theta(x_i, x_j); symmetric with unit diagonal.
Matrix kernel_matrix(const TrainableFeatureMap& map, std::span<const DataVector> points,
                     std::span<const double> theta);

struct KernelCounts {
  std::uint64_t exact = 0;
  std::uint64_t sampled = 0;
  std::uint64_t total() const noexcept { return exact + sampled; }
};

/// Evaluates fidelities between prepared states, exactly (shots == 0) or by
/// shot sampling, and counts every evaluation. Owns the shot-noise stream.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(std::size_t shots = 0, std::uint64_t seed = 0);

  double operator()(const StateVector& a, const StateVector& b);

  std::size_t shots() const noexcept { return shots_; }
  const KernelCounts& counts() const noexcept { return counts_; }
  void reset_counts() noexcept { counts_ = {}; }
  Rng& rng() noexcept { return rng_; }

 private:
  std::size_t shots_;
  Rng rng_;
  KernelCounts counts_;
};

}  // namespace qka
