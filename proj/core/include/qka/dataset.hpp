#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qka/feature_map.hpp"
#include "qka/kernel.hpp"
#include "qka/random.hpp"

namespace qka {

// Labels come from an observable evaluated on the structure state:
//   d(x) = <psi_opt(x)| O |psi_opt(x)> - b,   y = sign(d(x)),
// and a proposal x is kept only when |d(x)| >= margin. Since d is linear in
// the density-matrix feature of psi_opt(x), every accepted set is separable
// with margin at theta = theta_opt.

enum class LabelObservable {
  PauliZ,             // Z on `label_qubit`
  ReferenceFidelity,  // |T+><T+| - |T-><T-|, T± = psi_opt(reference_±)
};

enum class Proposal {
  Uniform,  // every component uniform on [0, 2pi)
  Coset,    // RX angles uniform on [0, range), RZ angles = class reference + N(0, noise)
};

struct CovariantDatasetSpec {
  std::size_t num_qubits = 4;
  std::vector<Edge> edges;
  double theta_opt = std::numbers::pi / 2;
  LabelObservable observable = LabelObservable::ReferenceFidelity;
  std::size_t label_qubit = 0;
  DataVector reference_plus;
  DataVector reference_minus;
  double threshold = 0.0;  // b
  double margin = 0.2;     // gamma
  Proposal proposal = Proposal::Uniform;
  double coset_noise = 0.1;
  double coset_rx_range = std::numbers::pi;  // RX angles uniform on [0, range)
  std::uint64_t seed = 0;

  std::size_t data_dim() const noexcept { return 2 * num_qubits; }
  /// Throws std::invalid_argument on gamma < 0, |b| >= 1, bad sizes or edges.
  void validate() const;
};

/// Fills reference_plus/minus from `seed`. Uniform proposal: both uniform on
/// [0, 2pi)^{2n}; 16 candidate pairs are drawn and the one with the smallest
/// worst-case overlap |<T+|T->|^2 over `structure_params` is kept (theta_opt
/// alone when empty). Coset proposal: RX components 0, RZ components a random
/// {0, pi} pattern for the positive class and its complement for the
/// negative class.
void assign_references(CovariantDatasetSpec& spec, std::span<const double> structure_params = {});

/// d(x) at the given structure parameter (threshold already subtracted).
double margin_functional(const CovariantDatasetSpec& spec, std::span<const double> x,
                         double theta_opt);
inline double margin_functional(const CovariantDatasetSpec& spec, std::span<const double> x) {
  return margin_functional(spec, x, spec.theta_opt);
}

/// Rejection-samples one labeled point. Throws InfeasibleSpec after 10,000
/// consecutive rejections.
LabeledPoint sample_point(const CovariantDatasetSpec& spec, Rng& rng);

struct GeneratedDataset {
  std::vector<LabeledPoint> points;
  double positive_fraction = 0.0;
  std::uint64_t proposals = 0;
};

/// M accepted points. Throws InfeasibleSpec when, after at least 10,000
/// proposals, fewer than 1% were accepted.
GeneratedDataset generate_dataset(const CovariantDatasetSpec& spec, std::size_t count, Rng& rng);

/// Empirical median of d + b (i.e. the raw observable) over `probes` proposals.
double median_threshold(const CovariantDatasetSpec& spec, Rng& rng, std::size_t probes = 1000);

struct DriftSchedule {
  double period = 1000.0;  // T
  double amplitude = 1.0;
  void validate() const;
};

/// amplitude * sin(2 pi t / T).
double drift_theta(double t, const DriftSchedule& schedule);

/// sample_point with theta_opt replaced by drift_theta(t).
LabeledPoint stream_sample(const CovariantDatasetSpec& spec, std::size_t t,
                           const DriftSchedule& schedule, Rng& rng);

/// CSV: one '# qka-dataset key=value ...' metadata line, header
/// x_1..x_{2n},y, then rows at 17 significant digits.
void write_dataset_csv(std::ostream& out, const CovariantDatasetSpec& spec,
                       std::span<const LabeledPoint> points);
void write_dataset_csv(std::ostream& out, std::span<const LabeledPoint> points);

struct DatasetFile {
  std::vector<LabeledPoint> points;
  std::string metadata;  // raw comment line without the leading '#', may be empty
};
DatasetFile read_dataset_csv(std::istream& in);

std::string to_string(LabelObservable o);
std::string to_string(Proposal p);
LabelObservable parse_observable(const std::string& s);
Proposal parse_proposal(const std::string& s);

}  // namespace qka
