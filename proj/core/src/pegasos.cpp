#include "qka/pegasos.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>

#include "qka/errors.hpp"
#include "qka/text.hpp"

namespace qka {

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a positive finite number");
  }
  spsa.validate();
}

AlignedModel::AlignedModel(TrainableFeatureMap map, SolverConfig config,
                           std::vector<double> initial_theta)
    : map_(std::move(map)), config_(config), spsa_(config.spsa) {
  config_.validate();
  set_theta(std::move(initial_theta));
}

double AlignedModel::normalization_at(std::size_t t) const noexcept {
  if (config_.window > 0) return static_cast<double>(std::min(t, config_.window));
  return static_cast<double>(t);
}

void AlignedModel::set_theta(std::vector<double> theta) {
  if (theta.size() != map_.param_dim()) {
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " components, map expects " + std::to_string(map_.param_dim()));
  }
  theta_ = std::move(theta);
}

void AlignedModel::append_record(SupportRecord record) {
  if (!records_.empty() && record.step <= records_.back().step) {
    throw std::invalid_argument("support records must have strictly increasing steps");
  }
  if (record.label != 1 && record.label != -1) {
    throw std::invalid_argument("support record label must be +1 or -1");
  }
  records_.push_back(std::move(record));
}

void AlignedModel::append_record(std::size_t step, std::size_t data_index, DataVector x,
                                 int label, std::vector<double> theta) {
  StateVector state = prepare_feature_state(map_, x, theta);
  append_record(SupportRecord{step, data_index, std::move(x), label, std::move(theta),
                              std::move(state)});
}

void AlignedModel::evict_through(std::size_t cutoff) {
  const auto keep = std::find_if(records_.begin(), records_.end(),
                                 [cutoff](const SupportRecord& r) { return r.step > cutoff; });
  records_.erase(records_.begin(), keep);
}

double decision_value_for_state(const AlignedModel& model, const StateVector& query,
                                double normalization, KernelEvaluator& kernel) {
  if (model.records().empty() || normalization <= 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& r : model.records()) sum += r.label * kernel(r.state, query);
  const double value = sum / (model.config().lambda * normalization);
  if (!std::isfinite(value)) throw NumericFailure("decision value is not finite");
  return value;
}

double decision_value(const AlignedModel& model, std::span<const double> x,
                      std::span<const double> theta_eval, KernelEvaluator& kernel) {
  const StateVector query = prepare_feature_state(model.map(), x, theta_eval);
  return decision_value_for_state(model, query, model.normalization(), kernel);
}

double decision_value(const AlignedModel& model, std::span<const double> x,
                      std::span<const double> theta_eval) {
  KernelEvaluator exact;
  return decision_value(model, x, theta_eval, exact);
}

int classify(const AlignedModel& model, std::span<const double> x, KernelEvaluator& kernel) {
  return sign_label(decision_value(model, x, model.theta(), kernel));
}

int classify(const AlignedModel& model, std::span<const double> x) {
  KernelEvaluator exact;
  return classify(model, x, exact);
}

StepReport pegasos_step(AlignedModel& model, const Sample& sample, Rng& rng,
                        KernelEvaluator& kernel) {
  if (sample.label != 1 && sample.label != -1) {
    throw std::invalid_argument("sample label must be +1 or -1");
  }
  const std::size_t t = model.current_step() + 1;
  const std::vector<double> theta_t(model.theta().begin(), model.theta().end());
  StateVector query = prepare_feature_state(model.map(), sample.x, theta_t);
  const double scale = model.normalization_at(t);

  StepReport report;
  report.step = t;
  report.decision = decision_value_for_state(model, query, scale, kernel);
  report.margin = sample.label * report.decision;
  report.predicted = sign_label(report.decision);

  std::vector<double> next_theta = theta_t;
  if (t == 1) {
    report.alpha = 1;
  } else if (report.margin < 1.0) {
    report.alpha = 1;
    if (t > model.config().warmup) {
      // f(theta) = -y/(lambda N) sum_{s<t} y_s k_{theta_s, theta}(x_s, x_t)
      const Objective f = [&](std::span<const double> theta) {
        const StateVector moved = prepare_feature_state(model.map(), sample.x, theta);
        return -sample.label * decision_value_for_state(model, moved, scale, kernel);
      };
      next_theta = model.optimizer().step(f, theta_t, rng);
      report.theta_updated = true;
    }
  } else {
    report.alpha = 0;
  }

  if (report.alpha == 1) {
    model.append_record(SupportRecord{t, sample.index, sample.x, sample.label, theta_t,
                                      std::move(query)});
  }
  model.set_theta(std::move(next_theta));
  model.set_step(t);
  if (model.windowed() && t > model.config().window) {
    model.evict_through(t - model.config().window);
  }
  return report;
}

SampleSource uniform_source(std::span<const LabeledPoint> dataset) {
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  std::vector<LabeledPoint> data(dataset.begin(), dataset.end());
  return [data = std::move(data)](std::size_t, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    const std::size_t i = pick(rng);
    return Sample{data[i].x, data[i].y, i};
  };
}

RunTrace train(AlignedModel& model, const SampleSource& source, std::size_t steps, Rng& rng,
               KernelEvaluator& kernel, const StepObserver& observer) {
  if (steps < 1) throw std::invalid_argument("train needs at least one step");
  if (!source) throw std::invalid_argument("train needs a sample source");

  RunTrace trace;
  trace.rows.reserve(steps);
  std::deque<int> recent;
  int recent_sum = 0;

  for (std::size_t i = 0; i < steps; ++i) {
    const Sample sample = source(model.current_step() + 1, rng);
    const StepReport report = pegasos_step(model, sample, rng, kernel);

    TraceRow row;
    row.t = report.step;
    row.theta.assign(model.theta().begin(), model.theta().end());
    row.alpha = report.alpha;
    row.margin = report.margin;
    row.single_shot_correct = report.predicted == sample.label ? 1 : 0;

    recent.push_back(row.single_shot_correct);
    recent_sum += row.single_shot_correct;
    if (recent.size() > kRollingWindow) {
      recent_sum -= recent.front();
      recent.pop_front();
    }
    row.rolling_accuracy = static_cast<double>(recent_sum) / static_cast<double>(recent.size());

    if (observer) observer(model, row);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

void truncate_window(AlignedModel& model, std::size_t window) {
  if (window < 1) throw std::invalid_argument("window must be at least 1");
  model.set_window(window);
  if (model.current_step() > window) model.evict_through(model.current_step() - window);
}

double weight_norm_squared(const AlignedModel& model, KernelEvaluator& kernel) {
  const auto& records = model.records();
  const double n = model.normalization();
  if (records.empty() || n <= 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t s = 0; s < records.size(); ++s) {
    sum += 1.0;  // k_{theta_s, theta_s}(x_s, x_s) = 1
    for (std::size_t u = s + 1; u < records.size(); ++u) {
      sum += 2.0 * records[s].label * records[u].label * kernel(records[s].state, records[u].state);
    }
  }
  const double scale = 1.0 / (model.config().lambda * n);
  return scale * scale * sum;
}

double primal_objective(const AlignedModel& model, std::span<const LabeledPoint> dataset,
                        KernelEvaluator& kernel) {
  if (dataset.empty()) throw std::invalid_argument("primal objective needs a nonempty dataset");
  double hinge = 0.0;
  for (const auto& p : dataset) {
    const double v = decision_value(model, p.x, model.theta(), kernel);
    hinge += std::max(0.0, 1.0 - p.y * v);
  }
  return 0.5 * model.config().lambda * weight_norm_squared(model, kernel) + hinge;
}

double accuracy(const AlignedModel& model, std::span<const LabeledPoint> dataset,
                KernelEvaluator& kernel) {
  if (dataset.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& p : dataset) {
    if (classify(model, p.x, kernel) == p.y) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, std::size_t param_dim) {
  out << "t,theta_opt";
  for (std::size_t j = 1; j <= param_dim; ++j) out << ",theta_" << j;
  out << ",alpha_t,margin,single_shot_correct,rolling_acc_50,test_acc,primal_obj\n";
  for (const auto& row : trace.rows) {
    out << row.t << ',';
    if (row.theta_opt) out << format_double(*row.theta_opt);
    for (const double th : row.theta) out << ',' << format_double(th);
    out << ',' << row.alpha << ',' << format_double(row.margin) << ','
        << row.single_shot_correct << ',' << format_double(row.rolling_accuracy) << ',';
    if (row.test_accuracy) out << format_double(*row.test_accuracy);
    out << ',';
    if (row.primal_objective) out << format_double(*row.primal_objective);
    out << '\n';
  }
}

}  // namespace qka
