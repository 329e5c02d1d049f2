#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qka/random.hpp"

namespace qka {

using Objective = std::function<double(std::span<const double>)>;

struct SpsaConfig {
  double learning_rate = 0.1;  // mu
  double perturbation = 0.1;   // c
  bool decay = false;          // mu/(k+1)^0.602, c/(k+1)^0.101 when set
  double learning_rate_exponent = 0.602;
  double perturbation_exponent = 0.101;

  /// Throws std::invalid_argument unless mu > 0 and c > 0.
  void validate() const;
};

/// g_j = [f(theta + c*delta) - f(theta - c*delta)] / (2 c delta_j) with delta
/// drawn uniformly from {-1, +1}^d. Exactly two evaluations of f. Throws
/// NumericFailure if f returns a non-finite value.
std::vector<double> spsa_gradient(const Objective& f, std::span<const double> theta, double c,
                                  Rng& rng);

/// Stateful optimizer; the step counter drives the optional gain schedule.
class Spsa {
 public:
  explicit Spsa(SpsaConfig config = {});

  /// theta' = theta - mu_k * spsa_gradient(f, theta, c_k).
  std::vector<double> step(const Objective& f, std::span<const double> theta, Rng& rng);

  double learning_rate_at(std::size_t k) const;
  double perturbation_at(std::size_t k) const;

  const SpsaConfig& config() const noexcept { return config_; }
  std::size_t step_count() const noexcept { return steps_; }
  void set_step_count(std::size_t k) noexcept { steps_ = k; }

 private:
  SpsaConfig config_;
  std::size_t steps_ = 0;
};

}  // namespace qka
