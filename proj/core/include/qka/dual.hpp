#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qka/feature_map.hpp"
#include "qka/kernel.hpp"
#include "qka/random.hpp"
#include "qka/spsa.hpp"

namespace qka {

struct DualSolution {
  std::vector<double> alpha;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct DualOptions {
  double tol = 1e-8;
  std::size_t max_iters = 100'000;
  void validate() const;
};

/// sum a - 1/2 a^T (Y K Y) a - lambda/2 sum a^2.
double dual_objective(std::span<const double> alpha, const Matrix& gram, std::span<const int> y,
                      double lambda);

/// Called with (iteration, objective) after every ascent step.
using DualMonitor = std::function<void(std::size_t, double)>;

/// Projected gradient ascent with step 1/(lambda + trace(YKY)), alpha >= 0.
/// Starts from `initial` when given, otherwise from 0. Stops once the
/// projected gradient norm drops below tol.
DualSolution solve_dual(const Matrix& gram, std::span<const int> y, double lambda,
                        const DualOptions& options = {}, std::span<const double> initial = {},
                        const DualMonitor& monitor = {});

/// sum_i alpha_i y_i k_theta(x_i, x) / lambda.
double dual_decision_value(std::span<const double> alpha, std::span<const int> y,
                           const TrainableFeatureMap& map, std::span<const DataVector> train,
                           std::span<const double> theta, std::span<const double> x,
                           double lambda);

/// Same expansion over one Gram row.
double dual_decision_from_row(std::span<const double> alpha, std::span<const int> y,
                              const Matrix& gram, std::size_t row, double lambda);

/// Fraction of Gram rows whose expansion sign matches the label (0 -> +1).
double dual_training_accuracy(const DualSolution& solution, const Matrix& gram,
                              std::span<const int> y, double lambda);

/// Gram matrix of the upper triangle including the diagonal, every entry
/// through `kernel` so that it is counted: M(M+1)/2 evaluations.
Matrix counted_gram(const TrainableFeatureMap& map, std::span<const DataVector> points,
                    std::span<const double> theta, KernelEvaluator& kernel);

struct NestedResult {
  std::vector<double> theta;
  DualSolution solution;
  std::vector<double> outer_objective;  // mean optimal dual value over each SPSA pair
};

/// Outer SPSA over theta minimizing the optimal dual objective; every
/// evaluation rebuilds the Gram matrix and solves from scratch. Returns the
/// final iterate together with its dual solution. Kernel evaluations land in
/// `kernel.counts()`: outer_iters * M(M+1) + M(M+1)/2.
NestedResult nested_qka(const TrainableFeatureMap& map, std::span<const LabeledPoint> dataset,
                        double lambda, const SpsaConfig& spsa, std::size_t outer_iters,
                        std::vector<double> initial_theta, Rng& rng, KernelEvaluator& kernel,
                        const DualOptions& options = {});

}  // namespace qka
