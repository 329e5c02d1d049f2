#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qka/feature_map.hpp"
#include "qka/kernel.hpp"
#include "qka/random.hpp"
#include "qka/spsa.hpp"
#include "qka/statevector.hpp"

namespace qka {

/// One margin violation kept in the weight expansion
///   w = 1/(lambda N) * sum_s y_s psi_{theta_s}(x_s).
/// Only alpha_t = 1 steps are stored.
struct SupportRecord {
  std::size_t step = 0;
  std::size_t data_index = 0;
  DataVector x;
  int label = 1;
  std::vector<double> theta;
  StateVector state{1};  // psi_theta(x), cached at insertion
};

struct SolverConfig {
  double lambda = 1.0;
  std::size_t window = 0;  // 0 keeps every record
  std::size_t warmup = 50;  // tau_in: no theta updates while t <= warmup
  std::size_t shots = 0;   // 0 = exact kernels
  SpsaConfig spsa;

  void validate() const;
};

class AlignedModel {
 public:
  AlignedModel(TrainableFeatureMap map, SolverConfig config, std::vector<double> initial_theta);

  const TrainableFeatureMap& map() const noexcept { return map_; }
  const SolverConfig& config() const noexcept { return config_; }
  const std::vector<SupportRecord>& records() const noexcept { return records_; }
  std::size_t current_step() const noexcept { return step_; }
  std::span<const double> theta() const noexcept { return theta_; }
  bool windowed() const noexcept { return config_.window > 0; }

  /// N in 1/(lambda N): the step count, or min(step, window) when windowed.
  double normalization_at(std::size_t t) const noexcept;
  double normalization() const noexcept { return normalization_at(step_); }

  Spsa& optimizer() noexcept { return spsa_; }
  const Spsa& optimizer() const noexcept { return spsa_; }

  // Low-level mutation used by the solver and checkpoint loader.
  void set_theta(std::vector<double> theta);
  void set_step(std::size_t step) noexcept { step_ = step; }
  void set_window(std::size_t window) noexcept { config_.window = window; }
  /// Appends a record; steps must be strictly increasing.
  void append_record(SupportRecord record);
  /// Builds the cached state and appends.
  void append_record(std::size_t step, std::size_t data_index, DataVector x, int label,
                     std::vector<double> theta);
  /// Drops records with step <= cutoff.
  void evict_through(std::size_t cutoff);

 private:
  TrainableFeatureMap map_;
  SolverConfig config_;
  std::vector<double> theta_;
  std::vector<SupportRecord> records_;
  std::size_t step_ = 0;
  Spsa spsa_;
};

struct Sample {
  DataVector x;
  int label = 1;
  std::size_t index = 0;
};

struct StepReport {
  std::size_t step = 0;
  int alpha = 0;
  double decision = 0.0;  // <w, psi> before the update
  double margin = 0.0;    // y * decision
  int predicted = 1;
  bool theta_updated = false;
};

/// sum_s y_s k(state_s, query) / (lambda * normalization); 0 without records.
double decision_value_for_state(const AlignedModel& model, const StateVector& query,
                                double normalization, KernelEvaluator& kernel);

/// Decision value at the model's current normalization with the query
/// prepared at theta_eval.
double decision_value(const AlignedModel& model, std::span<const double> x,
                      std::span<const double> theta_eval, KernelEvaluator& kernel);
double decision_value(const AlignedModel& model, std::span<const double> x,
                      std::span<const double> theta_eval);

/// Sign of the decision value at theta_current; 0 maps to +1.
int classify(const AlignedModel& model, std::span<const double> x, KernelEvaluator& kernel);
int classify(const AlignedModel& model, std::span<const double> x);

inline int sign_label(double value) noexcept { return value >= 0.0 ? 1 : -1; }

/// One iteration of kernel alignment with Pegasos on an already drawn sample.
StepReport pegasos_step(AlignedModel& model, const Sample& sample, Rng& rng,
                        KernelEvaluator& kernel);

struct TraceRow {
  std::size_t t = 0;
  std::optional<double> theta_opt;
  std::vector<double> theta;  // after the step
  int alpha = 0;
  double margin = 0.0;
  int single_shot_correct = 0;
  double rolling_accuracy = 0.0;
  std::optional<double> test_accuracy;
  std::optional<double> primal_objective;
};

struct RunTrace {
  std::vector<TraceRow> rows;
};

inline constexpr std::size_t kRollingWindow = 50;

/// Produces the t-th training sample.
using SampleSource = std::function<Sample(std::size_t t, Rng& rng)>;

/// Uniform with replacement from a fixed dataset. Throws on an empty set.
SampleSource uniform_source(std::span<const LabeledPoint> dataset);

/// Called after every step; may fill the optional trace columns.
using StepObserver = std::function<void(const AlignedModel&, TraceRow&)>;

RunTrace train(AlignedModel& model, const SampleSource& source, std::size_t steps, Rng& rng,
               KernelEvaluator& kernel, const StepObserver& observer = {});

/// Switches the model to windowed normalization and drops records with
/// step <= current_step - window.
void truncate_window(AlignedModel& model, std::size_t window);

/// ||w||^2 from the kernel expansion over retained records.
double weight_norm_squared(const AlignedModel& model, KernelEvaluator& kernel);

/// lambda/2 ||w||^2 + sum_i max(0, 1 - y_i <w, psi_theta(x_i)>).
double primal_objective(const AlignedModel& model, std::span<const LabeledPoint> dataset,
                        KernelEvaluator& kernel);

double accuracy(const AlignedModel& model, std::span<const LabeledPoint> dataset,
                KernelEvaluator& kernel);

/// Header + one line per row, 17 significant digits.
void write_trace_csv(std::ostream& out, const RunTrace& trace, std::size_t param_dim);

}  // namespace qka
