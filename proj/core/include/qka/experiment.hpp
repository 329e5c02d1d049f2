#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qka/config.hpp"
#include "qka/dataset.hpp"
#include "qka/pegasos.hpp"

namespace qka {

struct RunSummary {
  std::string experiment;
  std::uint64_t seed = 0;
  std::size_t qubits = 0;
  std::size_t iterations = 0;
  std::vector<double> final_theta;
  double final_rolling_accuracy = 0.0;
  std::optional<double> final_test_accuracy;
  std::optional<double> final_training_accuracy;
  std::size_t burn_in = 0;
  std::optional<double> post_burn_in_accuracy;
  std::optional<double> tracking_error;
  std::size_t support_records = 0;
  double positive_fraction = 0.0;
  KernelCounts training_kernels;
  KernelCounts diagnostic_kernels;
};

struct RunResult {
  RunTrace trace;
  RunSummary summary;
  AlignedModel model;
  CovariantDatasetSpec spec;
  std::vector<LabeledPoint> train;
  std::vector<LabeledPoint> test;
};

/// Generates the training and held-out sets for a config.
struct DatasetPair {
  CovariantDatasetSpec spec;
  GeneratedDataset train;
  std::vector<LabeledPoint> test;
};
DatasetPair make_datasets(const ExperimentConfig& config);

/// Pegasos-QKA on a fixed dataset from theta0. Test accuracy (and the primal
/// objective when enabled) every eval_every steps and at the last step.
/// With `train_override` the given points replace the generated training set
/// and no test set is drawn.
RunResult run_stationary(const ExperimentConfig& config,
                         std::optional<std::vector<LabeledPoint>> train_override = std::nullopt);

/// Pegasos-QKA on a stream whose structure parameter follows the drift
/// schedule. Summary metrics skip the first period/4 steps.
RunResult run_drift(const ExperimentConfig& config);

struct MethodReport {
  std::vector<double> theta;          // raw
  std::vector<double> theta_wrapped;  // in [0, 2pi)
  double training_accuracy = 0.0;
  double test_accuracy = 0.0;
  KernelCounts kernels;
};

struct ComparisonReport {
  std::uint64_t seed = 0;
  std::size_t qubits = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t outer_iters = 0;
  MethodReport pegasos;
  MethodReport nested;
};

/// Pegasos-QKA and the nested dual scheme on the same dataset and seed.
ComparisonReport run_baseline_comparison(const ExperimentConfig& config);

/// Angle in [0, 2pi).
double wrap_angle(double theta);
/// |theta - reference| measured on the circle, in [0, pi].
double circular_distance(double theta, double reference);

std::string summary_json(const RunSummary& summary);
std::string comparison_json(const ComparisonReport& report);

}  // namespace qka
