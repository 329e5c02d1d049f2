#include "qka/experiment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "qka/dual.hpp"

namespace qka {

namespace {

constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kTestStream = 3;
constexpr std::uint64_t kNestedStream = 4;
constexpr std::uint64_t kDiagnosticSalt = 0x9e3779b97f4a7c15ULL;

KernelEvaluator training_kernel(const ExperimentConfig& c) { return KernelEvaluator(c.shots, c.seed); }

KernelEvaluator diagnostic_kernel(const ExperimentConfig& c) {
  return KernelEvaluator(c.shots, c.seed ^ kDiagnosticSalt);
}

AlignedModel fresh_model(const ExperimentConfig& c, const CovariantDatasetSpec& spec) {
  return AlignedModel(covariant_map(c.qubits, spec.edges), solver_config(c), {c.theta0});
}

bool evaluation_step(const ExperimentConfig& c, std::size_t t) {
  return t % c.eval_every == 0 || t == c.iterations;
}

void fill_common(RunSummary& s, const ExperimentConfig& c, const RunTrace& trace,
                 const AlignedModel& model) {
  s.experiment = to_string(c.experiment);
  s.seed = c.seed;
  s.qubits = c.qubits;
  s.iterations = c.iterations;
  s.final_theta.assign(model.theta().begin(), model.theta().end());
  s.final_rolling_accuracy = trace.rows.back().rolling_accuracy;
  for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it) {
    if (it->test_accuracy) {
      s.final_test_accuracy = it->test_accuracy;
      break;
    }
  }
  s.support_records = model.records().size();
}

nlohmann::ordered_json counts_json(const KernelCounts& k) {
  return {{"exact", k.exact}, {"sampled", k.sampled}, {"total", k.total()}};
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::vector<double> wrapped(std::span<const double> theta) {
  std::vector<double> out;
  for (const double v : theta) out.push_back(wrap_angle(v));
  return out;
}

}  // namespace

double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

double circular_distance(double theta, double reference) {
  return std::abs(std::remainder(theta - reference, 2.0 * std::numbers::pi));
}

DatasetPair make_datasets(const ExperimentConfig& config) {
  config.validate();
  DatasetPair out;
  out.spec = dataset_spec(config);
  Rng rng = make_rng(config.seed, kDataStream);
  out.train = generate_dataset(out.spec, config.train_size, rng);
  out.test = generate_dataset(out.spec, config.test_size, rng).points;
  return out;
}

RunResult run_stationary(const ExperimentConfig& config,
                         std::optional<std::vector<LabeledPoint>> train_override) {
  config.validate();
  CovariantDatasetSpec spec;
  std::vector<LabeledPoint> train_set;
  std::vector<LabeledPoint> test_set;
  double positive_fraction = 0.0;
  if (train_override) {
    spec = dataset_spec(config);
    train_set = std::move(*train_override);
    if (train_set.empty()) throw std::invalid_argument("training set is empty");
    for (const auto& p : train_set) {
      if (p.x.size() != spec.data_dim()) {
        throw std::invalid_argument("training point dimension does not match qubits");
      }
      if (p.y > 0) positive_fraction += 1.0;
    }
    positive_fraction /= static_cast<double>(train_set.size());
  } else {
    DatasetPair data = make_datasets(config);
    spec = std::move(data.spec);
    positive_fraction = data.train.positive_fraction;
    train_set = std::move(data.train.points);
    test_set = std::move(data.test);
  }

  AlignedModel model = fresh_model(config, spec);
  KernelEvaluator kernel = training_kernel(config);
  KernelEvaluator diag = diagnostic_kernel(config);
  Rng rng = make_rng(config.seed, kTrainStream);

  const double theta_opt = spec.theta_opt;
  const StepObserver observer = [&](const AlignedModel& m, TraceRow& row) {
    row.theta_opt = theta_opt;
    if (!evaluation_step(config, row.t)) return;
    if (!test_set.empty()) row.test_accuracy = accuracy(m, test_set, diag);
    if (config.eval_primal) row.primal_objective = primal_objective(m, train_set, diag);
  };
  RunTrace trace = train(model, uniform_source(train_set), config.iterations, rng, kernel, observer);

  RunSummary summary;
  fill_common(summary, config, trace, model);
  summary.final_training_accuracy = accuracy(model, train_set, diag);
  summary.positive_fraction = positive_fraction;
  summary.training_kernels = kernel.counts();
  summary.diagnostic_kernels = diag.counts();
  return RunResult{std::move(trace), std::move(summary), std::move(model), std::move(spec),
                   std::move(train_set), std::move(test_set)};
}

RunResult run_drift(const ExperimentConfig& config) {
  config.validate();
  const CovariantDatasetSpec spec = dataset_spec(config);
  const DriftSchedule schedule = config.drift;
  AlignedModel model = fresh_model(config, spec);
  KernelEvaluator kernel = training_kernel(config);
  KernelEvaluator diag = diagnostic_kernel(config);
  Rng rng = make_rng(config.seed, kTrainStream);
  Rng test_rng = make_rng(config.seed, kTestStream);

  std::size_t positives = 0;
  const SampleSource source = [&](std::size_t t, Rng& r) {
    LabeledPoint p = stream_sample(spec, t, schedule, r);
    if (p.y > 0) ++positives;
    return Sample{std::move(p.x), p.y, t};
  };
  std::vector<LabeledPoint> last_test;
  const StepObserver observer = [&](const AlignedModel& m, TraceRow& row) {
    row.theta_opt = drift_theta(static_cast<double>(row.t), schedule);
    if (!evaluation_step(config, row.t)) return;
    last_test.clear();
    for (std::size_t i = 0; i < config.test_size; ++i) {
      last_test.push_back(stream_sample(spec, row.t, schedule, test_rng));
    }
    row.test_accuracy = accuracy(m, last_test, diag);
  };
  RunTrace trace = train(model, source, config.iterations, rng, kernel, observer);

  RunSummary summary;
  fill_common(summary, config, trace, model);
  summary.burn_in = static_cast<std::size_t>(schedule.period / 4.0);
  double acc_sum = 0.0;
  double err_sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : trace.rows) {
    if (row.t <= summary.burn_in) continue;
    acc_sum += row.rolling_accuracy;
    err_sum += circular_distance(row.theta[0], *row.theta_opt);
    ++n;
  }
  if (n > 0) {
    summary.post_burn_in_accuracy = acc_sum / static_cast<double>(n);
    summary.tracking_error = err_sum / static_cast<double>(n);
  }
  summary.positive_fraction =
      static_cast<double>(positives) / static_cast<double>(config.iterations);
  summary.training_kernels = kernel.counts();
  summary.diagnostic_kernels = diag.counts();
  return RunResult{std::move(trace), std::move(summary), std::move(model), spec,
                   {}, std::move(last_test)};
}

ComparisonReport run_baseline_comparison(const ExperimentConfig& config) {
  ExperimentConfig stationary = config;
  stationary.experiment = ExperimentKind::Stationary;
  stationary.validate();
  RunResult pegasos = run_stationary(stationary);

  ComparisonReport report;
  report.seed = config.seed;
  report.qubits = config.qubits;
  report.train_size = pegasos.train.size();
  report.test_size = pegasos.test.size();
  report.outer_iters = config.outer_iters;

  report.pegasos.theta = pegasos.summary.final_theta;
  report.pegasos.theta_wrapped = wrapped(report.pegasos.theta);
  report.pegasos.training_accuracy = pegasos.summary.final_training_accuracy.value_or(0.0);
  {
    KernelEvaluator diag = diagnostic_kernel(config);
    report.pegasos.test_accuracy = accuracy(pegasos.model, pegasos.test, diag);
  }
  report.pegasos.kernels = pegasos.summary.training_kernels;

  const TrainableFeatureMap map = covariant_map(config.qubits, pegasos.spec.edges);
  KernelEvaluator kernel = training_kernel(config);
  Rng rng = make_rng(config.seed, kNestedStream);
  const NestedResult nested = nested_qka(map, pegasos.train, config.lambda, config.spsa,
                                         config.outer_iters, {config.theta0}, rng, kernel,
                                         config.dual);
  report.nested.theta = nested.theta;
  report.nested.theta_wrapped = wrapped(nested.theta);
  report.nested.kernels = kernel.counts();

  std::vector<DataVector> xs;
  std::vector<int> ys;
  for (const auto& p : pegasos.train) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  KernelEvaluator diag = diagnostic_kernel(config);
  const Matrix gram = counted_gram(map, xs, nested.theta, diag);
  report.nested.training_accuracy = dual_training_accuracy(nested.solution, gram, ys, config.lambda);
  std::size_t hits = 0;
  for (const auto& p : pegasos.test) {
    const double f = dual_decision_value(nested.solution.alpha, ys, map, xs, nested.theta, p.x,
                                         config.lambda);
    if (sign_label(f) == p.y) ++hits;
  }
  report.nested.test_accuracy =
      pegasos.test.empty() ? 0.0
                           : static_cast<double>(hits) / static_cast<double>(pegasos.test.size());
  return report;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["experiment"] = s.experiment;
  j["seed"] = s.seed;
  j["qubits"] = s.qubits;
  j["iterations"] = s.iterations;
  j["final_theta"] = s.final_theta;
  j["final_theta_wrapped"] = wrapped(s.final_theta);
  j["final_rolling_accuracy"] = s.final_rolling_accuracy;
  j["final_test_accuracy"] = optional_json(s.final_test_accuracy);
  j["final_training_accuracy"] = optional_json(s.final_training_accuracy);
  if (s.experiment == "drift") {
    j["burn_in"] = s.burn_in;
    j["post_burn_in_rolling_accuracy"] = optional_json(s.post_burn_in_accuracy);
    j["mean_tracking_error"] = optional_json(s.tracking_error);
  }
  j["support_records"] = s.support_records;
  j["positive_fraction"] = s.positive_fraction;
  j["kernel_evaluations"] = {{"training", counts_json(s.training_kernels)},
                             {"diagnostics", counts_json(s.diagnostic_kernels)}};
  return j.dump(2);
}

std::string comparison_json(const ComparisonReport& r) {
  auto method = [](const MethodReport& m) {
    nlohmann::ordered_json j;
    j["theta"] = m.theta;
    j["theta_wrapped"] = m.theta_wrapped;
    j["training_accuracy"] = m.training_accuracy;
    j["test_accuracy"] = m.test_accuracy;
    j["kernel_evaluations"] = counts_json(m.kernels);
    return j;
  };
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["qubits"] = r.qubits;
  j["train_size"] = r.train_size;
  j["test_size"] = r.test_size;
  j["outer_iters"] = r.outer_iters;
  j["pegasos_qka"] = method(r.pegasos);
  j["nested_qka"] = method(r.nested);
  return j.dump(2);
}

}  // namespace qka
