#include "qka/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qka/errors.hpp"
#include "qka/statevector.hpp"
#include "qka/text.hpp"

namespace qka {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kMaxConsecutiveRejections = 10'000;
constexpr std::uint64_t kRateCheckAfter = 10'000;
constexpr double kMinAcceptanceRate = 0.01;

double pauli_z_expectation(const StateVector& s, std::size_t qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  double acc = 0.0;
  const auto amps = s.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += (i & mask) ? -std::norm(amps[i]) : std::norm(amps[i]);
  }
  return acc;
}

// Evaluates the labeling observable at a fixed theta_opt.
class Labeler {
 public:
  Labeler(const CovariantDatasetSpec& spec, double theta_opt)
      : spec_(spec),
        map_(covariant_map(spec.num_qubits, spec.edges)),
        theta_{theta_opt},
        plus_(spec.num_qubits),
        minus_(spec.num_qubits) {
    if (spec.observable == LabelObservable::ReferenceFidelity) {
      plus_ = prepare_feature_state(map_, spec.reference_plus, theta_);
      minus_ = prepare_feature_state(map_, spec.reference_minus, theta_);
    }
  }

  double observable(std::span<const double> x) const {
    const StateVector s = prepare_feature_state(map_, x, theta_);
    if (spec_.observable == LabelObservable::PauliZ) {
      return pauli_z_expectation(s, spec_.label_qubit);
    }
    return fidelity(plus_, s) - fidelity(minus_, s);
  }

  double functional(std::span<const double> x) const { return observable(x) - spec_.threshold; }

 private:
  const CovariantDatasetSpec& spec_;
  TrainableFeatureMap map_;
  std::vector<double> theta_;
  StateVector plus_;
  StateVector minus_;
};

DataVector propose(const CovariantDatasetSpec& spec, Rng& rng) {
  DataVector x(spec.data_dim());
  if (spec.proposal == Proposal::Uniform) {
    for (auto& v : x) v = kTwoPi * uniform01(rng);
    return x;
  }
  const DataVector& ref = random_sign(rng) > 0 ? spec.reference_plus : spec.reference_minus;
  std::normal_distribution<double> noise(0.0, spec.coset_noise);
  for (std::size_t k = 0; k < spec.num_qubits; ++k) {
    x[2 * k] = spec.coset_rx_range * uniform01(rng);
    x[2 * k + 1] = ref[2 * k + 1] + noise(rng);
  }
  return x;
}

struct Rejection {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

LabeledPoint draw(const CovariantDatasetSpec& spec, const Labeler& labeler, Rng& rng,
                  Rejection& stats) {
  for (std::uint64_t attempt = 0; attempt < kMaxConsecutiveRejections; ++attempt) {
    DataVector x = propose(spec, rng);
    ++stats.proposals;
    const double d = labeler.functional(x);
    if (std::abs(d) >= spec.margin) {
      ++stats.accepted;
      return {std::move(x), d > 0.0 ? 1 : -1};
    }
    if (stats.proposals >= kRateCheckAfter &&
        static_cast<double>(stats.accepted) <
            kMinAcceptanceRate * static_cast<double>(stats.proposals)) {
      break;
    }
  }
  std::ostringstream msg;
  msg << "dataset spec infeasible: accepted " << stats.accepted << " of " << stats.proposals
      << " proposals (margin " << spec.margin << ")";
  throw InfeasibleSpec(msg.str());
}

}  // namespace

void CovariantDatasetSpec::validate() const {
  if (num_qubits < 1) throw std::invalid_argument("dataset needs at least one qubit");
  check_edges(edges, num_qubits);
  if (!(margin >= 0.0)) throw std::invalid_argument("dataset margin must be >= 0");
  if (!(std::abs(threshold) < 1.0)) throw std::invalid_argument("dataset threshold must satisfy |b| < 1");
  if (label_qubit >= num_qubits) throw std::invalid_argument("label qubit out of range");
  if (!std::isfinite(theta_opt)) throw std::invalid_argument("theta_opt must be finite");
  const bool needs_refs =
      observable == LabelObservable::ReferenceFidelity || proposal == Proposal::Coset;
  if (needs_refs &&
      (reference_plus.size() != data_dim() || reference_minus.size() != data_dim())) {
    throw std::invalid_argument("reference vectors must have " + std::to_string(data_dim()) +
                                " components");
  }
  if (proposal == Proposal::Coset && !(coset_noise >= 0.0)) {
    throw std::invalid_argument("coset noise must be >= 0");
  }
  if (proposal == Proposal::Coset && !(coset_rx_range >= 0.0 && coset_rx_range <= kTwoPi)) {
    throw std::invalid_argument("coset rx range must lie in [0, 2pi]");
  }
}

void assign_references(CovariantDatasetSpec& spec, std::span<const double> structure_params) {
  Rng rng = make_rng(spec.seed, 0x7265f5ULL);
  const std::size_t dim = spec.data_dim();
  spec.reference_plus.assign(dim, 0.0);
  spec.reference_minus.assign(dim, 0.0);
  if (spec.proposal == Proposal::Coset) {
    for (std::size_t k = 0; k < spec.num_qubits; ++k) {
      const bool flip = random_sign(rng) > 0;
      spec.reference_plus[2 * k + 1] = flip ? std::numbers::pi : 0.0;
      spec.reference_minus[2 * k + 1] = flip ? 0.0 : std::numbers::pi;
    }
    return;
  }
  const std::vector<double> single{spec.theta_opt};
  const std::span<const double> thetas =
      structure_params.empty() ? std::span<const double>(single) : structure_params;
  const TrainableFeatureMap map = covariant_map(spec.num_qubits, spec.edges);
  double best = 2.0;
  DataVector plus(dim);
  DataVector minus(dim);
  for (int candidate = 0; candidate < 16; ++candidate) {
    for (auto& v : plus) v = kTwoPi * uniform01(rng);
    for (auto& v : minus) v = kTwoPi * uniform01(rng);
    double worst = 0.0;
    for (const double theta : thetas) {
      const std::vector<double> th{theta};
      worst = std::max(worst, fidelity(prepare_feature_state(map, plus, th),
                                       prepare_feature_state(map, minus, th)));
    }
    if (worst < best) {
      best = worst;
      spec.reference_plus = plus;
      spec.reference_minus = minus;
    }
  }
}

double margin_functional(const CovariantDatasetSpec& spec, std::span<const double> x,
                         double theta_opt) {
  spec.validate();
  if (x.size() != spec.data_dim()) {
    throw std::invalid_argument("data vector has wrong dimension for dataset spec");
  }
  return Labeler(spec, theta_opt).functional(x);
}

LabeledPoint sample_point(const CovariantDatasetSpec& spec, Rng& rng) {
  spec.validate();
  const Labeler labeler(spec, spec.theta_opt);
  Rejection stats;
  return draw(spec, labeler, rng, stats);
}

GeneratedDataset generate_dataset(const CovariantDatasetSpec& spec, std::size_t count,
                                  Rng& rng) {
  if (count < 1) throw std::invalid_argument("dataset size must be at least 1");
  spec.validate();
  const Labeler labeler(spec, spec.theta_opt);
  Rejection stats;
  GeneratedDataset out;
  out.points.reserve(count);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < count; ++i) {
    out.points.push_back(draw(spec, labeler, rng, stats));
    if (out.points.back().y > 0) ++positives;
  }
  out.positive_fraction = static_cast<double>(positives) / static_cast<double>(count);
  out.proposals = stats.proposals;
  return out;
}

double median_threshold(const CovariantDatasetSpec& spec, Rng& rng, std::size_t probes) {
  if (probes < 1) throw std::invalid_argument("median_threshold needs at least one probe");
  CovariantDatasetSpec probe = spec;
  probe.threshold = 0.0;
  probe.validate();
  const Labeler labeler(probe, probe.theta_opt);
  std::vector<double> values(probes);
  for (auto& v : values) v = labeler.observable(propose(probe, rng));
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(probes / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (probes % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

void DriftSchedule::validate() const {
  if (!(period >= 1.0)) throw std::invalid_argument("drift period must be >= 1");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("drift amplitude must be finite");
}

double drift_theta(double t, const DriftSchedule& schedule) {
  schedule.validate();
  if (t < 0.0) throw std::invalid_argument("drift time must be >= 0");
  return schedule.amplitude * std::sin(kTwoPi * t / schedule.period);
}

LabeledPoint stream_sample(const CovariantDatasetSpec& spec, std::size_t t,
                           const DriftSchedule& schedule, Rng& rng) {
  CovariantDatasetSpec moved = spec;
  moved.theta_opt = drift_theta(static_cast<double>(t), schedule);
  return sample_point(moved, rng);
}

std::string to_string(LabelObservable o) {
  return o == LabelObservable::PauliZ ? "pauli-z" : "reference";
}

std::string to_string(Proposal p) { return p == Proposal::Uniform ? "uniform" : "coset"; }

LabelObservable parse_observable(const std::string& s) {
  if (s == "pauli-z") return LabelObservable::PauliZ;
  if (s == "reference") return LabelObservable::ReferenceFidelity;
  throw std::invalid_argument("unknown observable '" + s + "' (pauli-z|reference)");
}

Proposal parse_proposal(const std::string& s) {
  if (s == "uniform") return Proposal::Uniform;
  if (s == "coset") return Proposal::Coset;
  throw std::invalid_argument("unknown proposal '" + s + "' (uniform|coset)");
}

namespace {

std::string join_vector(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

void write_rows(std::ostream& out, std::span<const LabeledPoint> points, std::size_t dim) {
  for (std::size_t j = 1; j <= dim; ++j) out << "x_" << j << ',';
  out << "y\n";
  for (const auto& p : points) {
    if (p.x.size() != dim) throw std::invalid_argument("dataset rows have inconsistent widths");
    for (const double v : p.x) out << format_double(v) << ',';
    out << p.y << '\n';
  }
}

}  // namespace

void write_dataset_csv(std::ostream& out, const CovariantDatasetSpec& spec,
                       std::span<const LabeledPoint> points) {
  out << "# qka-dataset n=" << spec.num_qubits << " edges=" << format_edges(spec.edges)
      << " theta_opt=" << format_double(spec.theta_opt)
      << " observable=" << to_string(spec.observable) << " label_qubit=" << spec.label_qubit
      << " proposal=" << to_string(spec.proposal) << " b=" << format_double(spec.threshold)
      << " gamma=" << format_double(spec.margin) << " seed=" << spec.seed;
  if (!spec.reference_plus.empty()) {
    out << " ref_plus=" << join_vector(spec.reference_plus)
        << " ref_minus=" << join_vector(spec.reference_minus);
  }
  out << '\n';
  write_rows(out, points, spec.data_dim());
}

void write_dataset_csv(std::ostream& out, std::span<const LabeledPoint> points) {
  if (points.empty()) throw std::invalid_argument("cannot write an empty dataset");
  write_rows(out, points, points.front().x.size());
}

DatasetFile read_dataset_csv(std::istream& in) {
  DatasetFile file;
  std::string line;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim_copy(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      if (file.metadata.empty()) file.metadata = trim_copy(std::string_view(trimmed).substr(1));
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(trimmed);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim_copy(cell));
    if (columns == 0) {
      if (cells.size() < 2 || cells.back() != "y") {
        throw std::invalid_argument("dataset csv: header must end with 'y'");
      }
      columns = cells.size();
      continue;
    }
    if (cells.size() != columns) {
      throw std::invalid_argument("dataset csv: line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(columns));
    }
    LabeledPoint p;
    for (std::size_t j = 0; j + 1 < columns; ++j) p.x.push_back(parse_double(cells[j]));
    p.y = static_cast<int>(parse_integer(cells.back()));
    if (p.y != 1 && p.y != -1) {
      throw std::invalid_argument("dataset csv: label on line " + std::to_string(line_no) +
                                  " must be -1 or 1");
    }
    file.points.push_back(std::move(p));
  }
  if (columns == 0) throw std::invalid_argument("dataset csv: missing header");
  return file;
}

}  // namespace qka
