// qka: dataset generation, training, evaluation and the experiment recipes.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qka/checkpoint.hpp"
#include "qka/config.hpp"
#include "qka/dataset.hpp"
#include "qka/errors.hpp"
#include "qka/experiment.hpp"
#include "qka/text.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> qubits;
  std::optional<std::size_t> shots;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "experiment config (key = value)");
  cmd->add_option("--seed", f.seed, "override seed");
  cmd->add_option("--qubits", f.qubits, "override number of qubits");
  cmd->add_option("--shots", f.shots, "override shots per kernel entry (0 = exact)");
  cmd->add_option("--out", f.out, "output path");
}

qka::ExperimentConfig resolve(const CommonFlags& f, std::optional<qka::ExperimentKind> kind) {
  qka::ExperimentConfig c = f.config_path.empty()
                                ? qka::default_config(kind.value_or(qka::ExperimentKind::Stationary))
                                : qka::load_config_file(f.config_path, kind);
  if (f.seed) c.seed = *f.seed;
  if (f.qubits) c.qubits = *f.qubits;
  if (f.shots) c.shots = *f.shots;
  c.validate();
  return c;
}

std::string output_path(const CommonFlags& f, const qka::ExperimentConfig& c,
                        const std::string& fallback) {
  if (!f.out.empty()) return f.out;
  if (!c.output.empty()) return c.output;
  return fallback;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::vector<qka::LabeledPoint> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset '" + path + "'");
  return qka::read_dataset_csv(in).points;
}

void write_trace(const std::string& path, const qka::RunResult& r) {
  auto out = open_out(path);
  qka::write_trace_csv(out, r.trace, r.model.map().param_dim());
}

void emit_summary(const std::string& trace_path, const std::string& json) {
  auto out = open_out(trace_path + ".summary.json");
  out << json << '\n';
  std::cout << json << '\n';
}

int cmd_generate(const CommonFlags& f) {
  const auto c = resolve(f, std::nullopt);
  const auto data = qka::make_datasets(c);
  const std::string path = output_path(f, c, "");
  if (path.empty()) {
    qka::write_dataset_csv(std::cout, data.spec, data.train.points);
  } else {
    auto out = open_out(path);
    qka::write_dataset_csv(out, data.spec, data.train.points);
    auto test = open_out(path + ".test.csv");
    qka::write_dataset_csv(test, data.spec, data.test);
  }
  std::cerr << "points " << data.train.points.size() << " positive_fraction "
            << qka::format_double(data.train.positive_fraction) << " proposals "
            << data.train.proposals << '\n';
  return 0;
}

int cmd_train(const CommonFlags& f, const std::string& data_path) {
  const auto c = resolve(f, std::nullopt);
  const std::string path = output_path(f, c, "model.qka");
  qka::RunResult r = [&] {
    if (c.experiment == qka::ExperimentKind::Drift) {
      if (!data_path.empty()) throw qka::ConfigError("--data", "drift training streams its own data");
      return qka::run_drift(c);
    }
    if (data_path.empty()) return qka::run_stationary(c);
    return qka::run_stationary(c, read_points(data_path));
  }();
  qka::save_model_file(path, r.model);
  write_trace(path + ".trace.csv", r);
  emit_summary(path, qka::summary_json(r.summary));
  return 0;
}

int cmd_evaluate(const CommonFlags& f, const std::string& model_path, const std::string& data_path) {
  if (model_path.empty()) throw qka::ConfigError("--model", "evaluate needs a model checkpoint");
  if (data_path.empty()) throw qka::ConfigError("--data", "evaluate needs a dataset");
  const qka::AlignedModel model = qka::load_model_file(model_path);
  const auto points = read_points(data_path);
  qka::KernelEvaluator kernel(f.shots.value_or(0), f.seed.value_or(0));

  std::ostringstream rows;
  rows << "index,decision,predicted,y\n";
  std::size_t hits = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = qka::decision_value(model, points[i].x, model.theta(), kernel);
    const int pred = qka::sign_label(d);
    if (pred == points[i].y) ++hits;
    rows << i << ',' << qka::format_double(d) << ',' << pred << ',' << points[i].y << '\n';
  }
  if (!f.out.empty()) {
    auto out = open_out(f.out);
    out << rows.str();
  }
  nlohmann::ordered_json j;
  j["points"] = points.size();
  j["accuracy"] = points.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(points.size());
  j["theta"] = std::vector<double>(model.theta().begin(), model.theta().end());
  j["support_records"] = model.records().size();
  j["kernel_evaluations"] = {{"exact", kernel.counts().exact}, {"sampled", kernel.counts().sampled}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_experiment(const CommonFlags& f, qka::ExperimentKind kind) {
  const auto c = resolve(f, kind);
  const std::string path =
      output_path(f, c, kind == qka::ExperimentKind::Drift ? "drift_trace.csv" : "stationary_trace.csv");
  const qka::RunResult r =
      kind == qka::ExperimentKind::Drift ? qka::run_drift(c) : qka::run_stationary(c);
  write_trace(path, r);
  emit_summary(path, qka::summary_json(r.summary));
  return 0;
}

int cmd_compare(const CommonFlags& f) {
  auto c = resolve(f, std::nullopt);
  if (c.experiment == qka::ExperimentKind::Drift) {
    throw qka::ConfigError("experiment", "compare-baselines needs a stationary dataset");
  }
  const std::string json = qka::comparison_json(qka::run_baseline_comparison(c));
  const std::string path = output_path(f, c, "");
  if (!path.empty()) {
    auto out = open_out(path);
    out << json << '\n';
  }
  std::cout << json << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pegasos quantum kernel alignment"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string data_path;
  std::string model_path;

  auto* gen = app.add_subcommand("generate-data", "write a labeled dataset as CSV");
  add_common(gen, flags);
  auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_common(train, flags);
  train->add_option("--data", data_path, "train on this dataset instead of generating one");
  auto* eval = app.add_subcommand("evaluate", "classify a dataset with a checkpoint");
  add_common(eval, flags);
  eval->add_option("--model", model_path, "model checkpoint");
  eval->add_option("--data", data_path, "dataset CSV");
  auto* stat = app.add_subcommand("experiment-stationary", "stationary alignment run");
  add_common(stat, flags);
  auto* drift = app.add_subcommand("experiment-drift", "drifting-structure tracking run");
  add_common(drift, flags);
  auto* cmp = app.add_subcommand("compare-baselines", "Pegasos-QKA against nested dual QKA");
  add_common(cmp, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(flags);
    if (train->parsed()) return cmd_train(flags, data_path);
    if (eval->parsed()) return cmd_evaluate(flags, model_path, data_path);
    if (stat->parsed()) return cmd_experiment(flags, qka::ExperimentKind::Stationary);
    if (drift->parsed()) return cmd_experiment(flags, qka::ExperimentKind::Drift);
    if (cmp->parsed()) return cmd_compare(flags);
  } catch (const qka::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
