#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qka/statevector.hpp"

namespace qka {

using Edge = std::pair<std::size_t, std::size_t>;

enum class GateKind { RX, RY, RZ, CNOT };

/// Where a rotation angle comes from.
enum class AngleSource { Data, Param, Constant };

struct Gate {
  GateKind kind = GateKind::RX;
  std::size_t qubit = 0;   // rotated qubit, or CNOT control
  std::size_t target = 0;  // CNOT only
  AngleSource source = AngleSource::Constant;
  std::size_t index = 0;   // component of x or theta
  double value = 0.0;      // constant angle

  bool operator==(const Gate&) const = default;
};

/// Data-upload layers E_i(x) and trainable layers F_i(theta). The kind is a
/// label; validation only checks index ranges.
enum class LayerKind { Data, Trainable };

struct Layer {
  LayerKind kind = LayerKind::Data;
  std::vector<Gate> gates;

  bool operator==(const Layer&) const = default;
};

class TrainableFeatureMap {
 public:
  /// Throws std::invalid_argument when a gate references a qubit, data or
  /// parameter index outside the declared sizes, or an edge is invalid.
  TrainableFeatureMap(std::size_t num_qubits, std::size_t data_dim, std::size_t param_dim,
                      std::vector<Layer> layers, std::vector<Edge> edges = {});

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t data_dim() const noexcept { return data_dim_; }
  std::size_t param_dim() const noexcept { return param_dim_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Applies E(x, theta) to `state` in declared layer order.
  void apply(StateVector& state, std::span<const double> x, std::span<const double> theta) const;
  /// Applies E(x, theta)^dagger.
  void apply_inverse(StateVector& state, std::span<const double> x,
                     std::span<const double> theta) const;

  void check_dimensions(std::span<const double> x, std::span<const double> theta) const;

  bool operator==(const TrainableFeatureMap&) const = default;

 private:
  double angle_of(const Gate& g, std::span<const double> x, std::span<const double> theta) const;

  std::size_t num_qubits_;
  std::size_t data_dim_;
  std::size_t param_dim_;
  std::vector<Layer> layers_;
  std::vector<Edge> edges_;
};

/// (0,1), (1,2), ..., (n-2, n-1).
std::vector<Edge> chain_edges(std::size_t num_qubits);

/// Validates an edge list for `num_qubits` (in range, no self loops).
void check_edges(std::span<const Edge> edges, std::size_t num_qubits);

/// |psi_theta(x)> = U(x) V_theta |0>, with V_theta = (prod CNOT over edges) RY(theta)^n
/// and U(x) = prod_k RX(x[2k]) RZ(x[2k+1]). The RY layer is applied first, then
/// the CNOTs in edge order, then per qubit RZ followed by RX.
TrainableFeatureMap covariant_map(std::size_t num_qubits, std::vector<Edge> edges);

StateVector prepare_feature_state(const TrainableFeatureMap& map, std::span<const double> x,
                                  std::span<const double> theta);

/// Plain-text description (qubits, dims, edges, one gate per line).
std::string to_text(const TrainableFeatureMap& map);
TrainableFeatureMap map_from_text(std::string_view text);

/// "0-1,1-2" <-> edge list. "chain" and "none" are accepted by the parser.
std::string format_edges(std::span<const Edge> edges);
std::vector<Edge> parse_edges(std::string_view text, std::size_t num_qubits);

}  // namespace qka
