#include "qka/spsa.hpp"

#include <cmath>
#include <stdexcept>

#include "qka/errors.hpp"

namespace qka {

void SpsaConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("spsa learning rate must be > 0");
  if (!(perturbation > 0.0)) throw std::invalid_argument("spsa perturbation must be > 0");
}

std::vector<double> spsa_gradient(const Objective& f, std::span<const double> theta, double c,
                                  Rng& rng) {
  if (!(c > 0.0)) throw std::invalid_argument("spsa perturbation must be > 0");

  std::vector<double> delta(theta.size());
  for (auto& d : delta) d = random_sign(rng);

  std::vector<double> plus(theta.begin(), theta.end());
  std::vector<double> minus(theta.begin(), theta.end());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    plus[j] += c * delta[j];
    minus[j] -= c * delta[j];
  }
  const double f_plus = f(plus);
  const double f_minus = f(minus);
  if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
    throw NumericFailure("spsa: objective returned a non-finite value");
  }

  const double diff = (f_plus - f_minus) / (2.0 * c);
  std::vector<double> grad(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) grad[j] = diff / delta[j];
  return grad;
}

Spsa::Spsa(SpsaConfig config) : config_(config) { config_.validate(); }

double Spsa::learning_rate_at(std::size_t k) const {
  if (!config_.decay) return config_.learning_rate;
  return config_.learning_rate /
         std::pow(static_cast<double>(k + 1), config_.learning_rate_exponent);
}

double Spsa::perturbation_at(std::size_t k) const {
  if (!config_.decay) return config_.perturbation;
  return config_.perturbation /
         std::pow(static_cast<double>(k + 1), config_.perturbation_exponent);
}

std::vector<double> Spsa::step(const Objective& f, std::span<const double> theta, Rng& rng) {
  const double mu = learning_rate_at(steps_);
  const auto grad = spsa_gradient(f, theta, perturbation_at(steps_), rng);
  std::vector<double> next(theta.begin(), theta.end());
  for (std::size_t j = 0; j < next.size(); ++j) next[j] -= mu * grad[j];
  ++steps_;
  return next;
}

}  // namespace qka
