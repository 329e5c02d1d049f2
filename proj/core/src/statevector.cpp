#include "qka/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qka {

namespace {

void check_qubit(std::size_t qubit, std::size_t num_qubits) {
  if (qubit >= num_qubits) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range for " +
                                std::to_string(num_qubits) + " qubits");
  }
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) {
    throw std::invalid_argument("state vector needs at least one qubit");
  }
  if (num_qubits > kMaxQubits) {
    throw std::invalid_argument("dense state vector limited to " + std::to_string(kMaxQubits) +
                                " qubits");
  }
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = Complex{1.0, 0.0};
}

double StateVector::norm_squared() const noexcept {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return acc;
}

void StateVector::rotate(Axis axis, double angle, std::size_t qubit) {
  check_qubit(qubit, num_qubits_);
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);

  // 2x2 matrix [[m00, m01], [m10, m11]] acting on (|0>, |1>) of `qubit`.
  Complex m00, m01, m10, m11;
  switch (axis) {
    case Axis::X:
      m00 = {c, 0.0};
      m01 = {0.0, -s};
      m10 = {0.0, -s};
      m11 = {c, 0.0};
      break;
    case Axis::Y:
      m00 = {c, 0.0};
      m01 = {-s, 0.0};
      m10 = {s, 0.0};
      m11 = {c, 0.0};
      break;
    case Axis::Z:
      m00 = {c, -s};
      m01 = {0.0, 0.0};
      m10 = {0.0, 0.0};
      m11 = {c, s};
      break;
  }

  const std::size_t stride = std::size_t{1} << qubit;
  const std::size_t dim = amplitudes_.size();
  for (std::size_t block = 0; block < dim; block += 2 * stride) {
    for (std::size_t i = block; i < block + stride; ++i) {
      const Complex a0 = amplitudes_[i];
      const Complex a1 = amplitudes_[i + stride];
      amplitudes_[i] = m00 * a0 + m01 * a1;
      amplitudes_[i + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void StateVector::cnot(std::size_t control, std::size_t target) {
  check_qubit(control, num_qubits_);
  check_qubit(target, num_qubits_);
  if (control == target) {
    throw std::invalid_argument("cnot control and target must differ");
  }
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    // Visit each swapped pair once: control set, target clear.
    if ((i & cmask) && !(i & tmask)) {
      std::swap(amplitudes_[i], amplitudes_[i | tmask]);
    }
  }
}

StateVector zero_state(std::size_t num_qubits) { return StateVector(num_qubits); }

StateVector apply_rotation(StateVector s, Axis axis, double angle, std::size_t qubit) {
  s.rotate(axis, angle, qubit);
  return s;
}

StateVector apply_cnot(StateVector s, std::size_t control, std::size_t target) {
  s.cnot(control, target);
  return s;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("inner_product: qubit count mismatch (" +
                                std::to_string(a.num_qubits()) + " vs " +
                                std::to_string(b.num_qubits()) + ")");
  }
  const auto av = a.amplitudes();
  const auto bv = b.amplitudes();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    // conj(a) * b
    re += av[i].real() * bv[i].real() + av[i].imag() * bv[i].imag();
    im += av[i].real() * bv[i].imag() - av[i].imag() * bv[i].real();
  }
  return {re, im};
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

}  // namespace qka
