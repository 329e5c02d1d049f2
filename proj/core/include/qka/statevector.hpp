#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qka {

using Complex = std::complex<double>;

enum class Axis { X, Y, Z };

/// Dense pure state over `num_qubits` qubits.
///
/// Amplitude index bit k holds qubit k, so qubit 0 is the least significant
/// bit of the index (and the leftmost tensor factor in |q0 q1 ... >).
/// Rotations follow R_A(phi) = exp(-i phi A / 2).
class StateVector {
 public:
  explicit StateVector(std::size_t num_qubits);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amplitudes_.size(); }

  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::span<Complex> amplitudes() noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const noexcept;

  // In-place gate application; the free functions below are value-returning
  // wrappers.
  void rotate(Axis axis, double angle, std::size_t qubit);
  void cnot(std::size_t control, std::size_t target);

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

/// |0...0> on q qubits. Throws std::invalid_argument for q < 1.
StateVector zero_state(std::size_t num_qubits);

StateVector apply_rotation(StateVector s, Axis axis, double angle, std::size_t qubit);
StateVector apply_cnot(StateVector s, std::size_t control, std::size_t target);

/// <a|b>, conjugate-linear in a.
Complex inner_product(const StateVector& a, const StateVector& b);

/// |<a|b>|^2 clipped to [0, 1].
double fidelity(const StateVector& a, const StateVector& b);

/// Upper bound on supported qubit count for the dense representation.
inline constexpr std::size_t kMaxQubits = 24;

}  // namespace qka
