#include "qka/dual.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qka/errors.hpp"

namespace qka {

namespace {

void check_problem(const Matrix& gram, std::span<const int> y, double lambda) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("gram matrix must be square");
  if (gram.rows() != y.size()) {
    throw std::invalid_argument("gram matrix is " + std::to_string(gram.rows()) + "x" +
                                std::to_string(gram.cols()) + " but there are " +
                                std::to_string(y.size()) + " labels");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  for (const int label : y) {
    if (label != 1 && label != -1) throw std::invalid_argument("labels must be -1 or +1");
  }
}

void check_symmetric(const Matrix& gram) {
  const std::size_t m = gram.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double a = gram(i, j);
      const double b = gram(j, i);
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
        throw std::invalid_argument("gram matrix is not symmetric at (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
      }
    }
  }
}

// gradient_i = 1 - y_i sum_j K_ij y_j a_j - lambda a_i
void dual_gradient(std::span<const double> alpha, const Matrix& gram, std::span<const int> y,
                   double lambda, std::vector<double>& grad) {
  const std::size_t m = alpha.size();
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += gram(i, j) * y[j] * alpha[j];
    grad[i] = 1.0 - y[i] * acc - lambda * alpha[i];
  }
}

double projected_norm(std::span<const double> alpha, std::span<const double> grad) {
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double g = (alpha[i] <= 0.0 && grad[i] < 0.0) ? 0.0 : grad[i];
    acc += g * g;
  }
  return std::sqrt(acc);
}

}  // namespace

void DualOptions::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("dual tolerance must be > 0");
  if (max_iters < 1) throw std::invalid_argument("dual max_iters must be >= 1");
}

double dual_objective(std::span<const double> alpha, const Matrix& gram, std::span<const int> y,
                      double lambda) {
  check_problem(gram, y, lambda);
  if (alpha.size() != y.size()) {
    throw std::invalid_argument("alpha has " + std::to_string(alpha.size()) +
                                " entries, expected " + std::to_string(y.size()));
  }
  const std::size_t m = alpha.size();
  double linear = 0.0;
  double quad = 0.0;
  double ridge = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    linear += alpha[i];
    ridge += alpha[i] * alpha[i];
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += gram(i, j) * y[j] * alpha[j];
    quad += alpha[i] * y[i] * row;
  }
  return linear - 0.5 * quad - 0.5 * lambda * ridge;
}

DualSolution solve_dual(const Matrix& gram, std::span<const int> y, double lambda,
                        const DualOptions& options, std::span<const double> initial,
                        const DualMonitor& monitor) {
  check_problem(gram, y, lambda);
  check_symmetric(gram);
  options.validate();
  const std::size_t m = y.size();

  DualSolution sol;
  if (initial.empty()) {
    sol.alpha.assign(m, 0.0);
  } else {
    if (initial.size() != m) throw std::invalid_argument("initial alpha has wrong size");
    sol.alpha.assign(initial.begin(), initial.end());
    for (auto& a : sol.alpha) {
      if (!std::isfinite(a)) throw std::invalid_argument("initial alpha must be finite");
      a = std::max(a, 0.0);
    }
  }

  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) trace += gram(i, i);
  const double step = 1.0 / (lambda + trace);

  std::vector<double> grad(m);
  dual_gradient(sol.alpha, gram, y, lambda, grad);
  while (sol.iterations < options.max_iters) {
    if (projected_norm(sol.alpha, grad) < options.tol) {
      sol.converged = true;
      break;
    }
    for (std::size_t i = 0; i < m; ++i) sol.alpha[i] = std::max(0.0, sol.alpha[i] + step * grad[i]);
    ++sol.iterations;
    dual_gradient(sol.alpha, gram, y, lambda, grad);
    if (monitor) monitor(sol.iterations, dual_objective(sol.alpha, gram, y, lambda));
  }
  if (!sol.converged && projected_norm(sol.alpha, grad) < options.tol) sol.converged = true;
  sol.objective = dual_objective(sol.alpha, gram, y, lambda);
  if (!std::isfinite(sol.objective)) throw NumericFailure("dual objective is not finite");
  return sol;
}

double dual_decision_value(std::span<const double> alpha, std::span<const int> y,
                           const TrainableFeatureMap& map, std::span<const DataVector> train,
                           std::span<const double> theta, std::span<const double> x,
                           double lambda) {
  if (alpha.size() != y.size() || alpha.size() != train.size()) {
    throw std::invalid_argument("alpha, labels and training points differ in length");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const StateVector query = prepare_feature_state(map, x, theta);
  double acc = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    acc += alpha[i] * y[i] * fidelity(prepare_feature_state(map, train[i], theta), query);
  }
  return acc / lambda;
}

double dual_decision_from_row(std::span<const double> alpha, std::span<const int> y,
                              const Matrix& gram, std::size_t row, double lambda) {
  double acc = 0.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) acc += alpha[j] * y[j] * gram(row, j);
  return acc / lambda;
}

double dual_training_accuracy(const DualSolution& solution, const Matrix& gram,
                              std::span<const int> y, double lambda) {
  if (y.empty()) throw std::invalid_argument("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double f = dual_decision_from_row(solution.alpha, y, gram, i, lambda);
    if ((f >= 0.0 ? 1 : -1) == y[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(y.size());
}

Matrix counted_gram(const TrainableFeatureMap& map, std::span<const DataVector> points,
                    std::span<const double> theta, KernelEvaluator& kernel) {
  std::vector<StateVector> states;
  states.reserve(points.size());
  for (const auto& x : points) states.push_back(prepare_feature_state(map, x, theta));
  Matrix gram(points.size(), points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i; j < points.size(); ++j) {
      const double k = kernel(states[i], states[j]);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

NestedResult nested_qka(const TrainableFeatureMap& map, std::span<const LabeledPoint> dataset,
                        double lambda, const SpsaConfig& spsa, std::size_t outer_iters,
                        std::vector<double> initial_theta, Rng& rng, KernelEvaluator& kernel,
                        const DualOptions& options) {
  if (dataset.empty()) throw std::invalid_argument("nested_qka needs a nonempty dataset");
  if (initial_theta.size() != map.param_dim()) {
    throw std::invalid_argument("initial theta has wrong dimension");
  }
  std::vector<DataVector> xs;
  std::vector<int> ys;
  for (const auto& p : dataset) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  auto solve_at = [&](std::span<const double> theta) {
    const Matrix gram = counted_gram(map, xs, theta, kernel);
    return solve_dual(gram, ys, lambda, options);
  };

  NestedResult out;
  out.theta = std::move(initial_theta);
  Spsa optimizer(spsa);
  double pair_sum = 0.0;
  const Objective g = [&](std::span<const double> theta) {
    const double value = solve_at(theta).objective;
    pair_sum += value;
    return value;
  };
  for (std::size_t k = 0; k < outer_iters; ++k) {
    pair_sum = 0.0;
    out.theta = optimizer.step(g, out.theta, rng);
    out.outer_objective.push_back(0.5 * pair_sum);
  }
  out.solution = solve_at(out.theta);
  return out;
}

}  // namespace qka
