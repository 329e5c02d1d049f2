#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qka/dataset.hpp"
#include "qka/dual.hpp"
#include "qka/pegasos.hpp"

namespace qka {

enum class ExperimentKind { Stationary, Drift, DualBaseline, NestedQka };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& s);

/// Flat `key = value` experiment description; '#' starts a comment.
/// Every field has a default, and the defaults depend on the experiment kind
/// (drift runs are smaller, windowed and use the uniform proposal).
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Stationary;
  std::uint64_t seed = 0;
  std::size_t qubits = 4;
  std::string edges = "chain";

  double lambda = 1.0;
  std::size_t iterations = 1500;  // tau
  std::size_t warmup = 50;        // tau_in
  std::size_t window = 0;
  std::size_t shots = 0;
  double theta0 = 0.0;
  SpsaConfig spsa;

  double theta_opt = 1.5707963267948966;
  LabelObservable observable = LabelObservable::ReferenceFidelity;
  std::size_t label_qubit = 0;
  Proposal proposal = Proposal::Coset;
  double coset_noise = 0.1;
  double coset_rx_range = 3.141592653589793;
  double gamma = 0.2;
  std::string b_mode = "fixed";  // fixed | median
  double b = 0.0;
  std::size_t train_size = 40;
  std::size_t test_size = 25;

  DriftSchedule drift;

  std::size_t eval_every = 50;
  bool eval_primal = false;

  std::size_t outer_iters = 30;
  DualOptions dual;

  std::string output;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

ExperimentConfig default_config(ExperimentKind kind);

/// Parses config text. `implied` is the kind demanded by the caller (e.g. a
/// CLI subcommand); a conflicting `experiment` key is an error. Unknown
/// keys, duplicates and malformed values raise ConfigError.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> implied = std::nullopt);
ExperimentConfig load_config_file(const std::string& path,
                                  std::optional<ExperimentKind> implied = std::nullopt);

/// Canonical text form; parse_config(to_text(c)) == c field by field.
std::string to_text(const ExperimentConfig& config);

/// Solver settings and dataset spec derived from the config. The dataset
/// spec has its references assigned and, for b_mode = median, its threshold
/// set from 1000 probes.
SolverConfig solver_config(const ExperimentConfig& config);
CovariantDatasetSpec dataset_spec(const ExperimentConfig& config);

}  // namespace qka
