#include "qka/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "qka/errors.hpp"
#include "qka/text.hpp"

namespace qka {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Stationary: return "stationary";
    case ExperimentKind::Drift: return "drift";
    case ExperimentKind::DualBaseline: return "dual-baseline";
    case ExperimentKind::NestedQka: return "nested-qka";
  }
  return "stationary";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  if (s == "stationary") return ExperimentKind::Stationary;
  if (s == "drift") return ExperimentKind::Drift;
  if (s == "dual-baseline") return ExperimentKind::DualBaseline;
  if (s == "nested-qka") return ExperimentKind::NestedQka;
  throw std::invalid_argument("unknown experiment '" + s +
                              "' (stationary|drift|dual-baseline|nested-qka)");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  if (kind == ExperimentKind::Drift) {
    c.qubits = 3;
    c.iterations = 2500;
    c.window = 100;
    c.proposal = Proposal::Uniform;
    c.gamma = 0.5;
  }
  return c;
}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

std::size_t to_size(const std::string& key, const std::string& v) {
  long long n = 0;
  try {
    n = parse_integer(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  if (n < 0) throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(n);
}

double to_real(const std::string& key, const std::string& v) {
  double d = 0.0;
  try {
    d = parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  if (!std::isfinite(d)) throw ConfigError(key, "expected a finite number, got '" + v + "'");
  return d;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

template <class F>
auto wrap_enum(const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](auto& c, auto& k, auto& v) {
         long long n = 0;
         try {
           n = parse_integer(v);
         } catch (const std::exception&) {
           throw ConfigError(k, "expected an integer seed, got '" + v + "'");
         }
         if (n < 0) throw ConfigError(k, "seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"qubits", [](auto& c, auto& k, auto& v) { c.qubits = to_size(k, v); }},
      {"edges", [](auto& c, auto&, auto& v) { c.edges = v; }},
      {"solver.lambda", [](auto& c, auto& k, auto& v) { c.lambda = to_real(k, v); }},
      {"solver.iterations", [](auto& c, auto& k, auto& v) { c.iterations = to_size(k, v); }},
      {"solver.warmup", [](auto& c, auto& k, auto& v) { c.warmup = to_size(k, v); }},
      {"solver.window", [](auto& c, auto& k, auto& v) { c.window = to_size(k, v); }},
      {"solver.shots", [](auto& c, auto& k, auto& v) { c.shots = to_size(k, v); }},
      {"solver.theta0", [](auto& c, auto& k, auto& v) { c.theta0 = to_real(k, v); }},
      {"spsa.mu", [](auto& c, auto& k, auto& v) { c.spsa.learning_rate = to_real(k, v); }},
      {"spsa.c", [](auto& c, auto& k, auto& v) { c.spsa.perturbation = to_real(k, v); }},
      {"spsa.decay", [](auto& c, auto& k, auto& v) { c.spsa.decay = to_bool(k, v); }},
      {"data.theta_opt", [](auto& c, auto& k, auto& v) { c.theta_opt = to_real(k, v); }},
      {"data.observable",
       [](auto& c, auto& k, auto& v) { c.observable = wrap_enum(k, [&] { return parse_observable(v); }); }},
      {"data.label_qubit", [](auto& c, auto& k, auto& v) { c.label_qubit = to_size(k, v); }},
      {"data.proposal",
       [](auto& c, auto& k, auto& v) { c.proposal = wrap_enum(k, [&] { return parse_proposal(v); }); }},
      {"data.coset_noise", [](auto& c, auto& k, auto& v) { c.coset_noise = to_real(k, v); }},
      {"data.coset_rx_range", [](auto& c, auto& k, auto& v) { c.coset_rx_range = to_real(k, v); }},
      {"data.gamma", [](auto& c, auto& k, auto& v) { c.gamma = to_real(k, v); }},
      {"data.b_mode", [](auto& c, auto&, auto& v) { c.b_mode = v; }},
      {"data.b", [](auto& c, auto& k, auto& v) { c.b = to_real(k, v); }},
      {"data.train_size", [](auto& c, auto& k, auto& v) { c.train_size = to_size(k, v); }},
      {"data.test_size", [](auto& c, auto& k, auto& v) { c.test_size = to_size(k, v); }},
      {"drift.period", [](auto& c, auto& k, auto& v) { c.drift.period = to_real(k, v); }},
      {"drift.amplitude", [](auto& c, auto& k, auto& v) { c.drift.amplitude = to_real(k, v); }},
      {"eval.every", [](auto& c, auto& k, auto& v) { c.eval_every = to_size(k, v); }},
      {"eval.primal", [](auto& c, auto& k, auto& v) { c.eval_primal = to_bool(k, v); }},
      {"baseline.outer_iters", [](auto& c, auto& k, auto& v) { c.outer_iters = to_size(k, v); }},
      {"baseline.tol", [](auto& c, auto& k, auto& v) { c.dual.tol = to_real(k, v); }},
      {"baseline.max_iters", [](auto& c, auto& k, auto& v) { c.dual.max_iters = to_size(k, v); }},
      {"output.path", [](auto& c, auto&, auto& v) { c.output = v; }},
  };
  return table;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (qubits < 1 || qubits > 24) throw ConfigError("qubits", "must be in 1..24");
  try {
    parse_edges(edges, qubits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("edges", e.what());
  }
  if (!(lambda > 0.0)) throw ConfigError("solver.lambda", "must be > 0");
  if (iterations < 1) throw ConfigError("solver.iterations", "must be >= 1");
  if (!(spsa.learning_rate > 0.0)) throw ConfigError("spsa.mu", "must be > 0");
  if (!(spsa.perturbation > 0.0)) throw ConfigError("spsa.c", "must be > 0");
  if (label_qubit >= qubits) throw ConfigError("data.label_qubit", "must be < qubits");
  if (!(gamma >= 0.0)) throw ConfigError("data.gamma", "must be >= 0");
  if (b_mode != "fixed" && b_mode != "median") {
    throw ConfigError("data.b_mode", "must be fixed or median, got '" + b_mode + "'");
  }
  if (!(std::abs(b) < 1.0)) throw ConfigError("data.b", "must satisfy |b| < 1");
  if (!(coset_noise >= 0.0)) throw ConfigError("data.coset_noise", "must be >= 0");
  if (!(coset_rx_range >= 0.0 && coset_rx_range <= 6.283185307179586)) {
    throw ConfigError("data.coset_rx_range", "must lie in [0, 2pi]");
  }
  if (train_size < 1) throw ConfigError("data.train_size", "must be >= 1");
  if (test_size < 1) throw ConfigError("data.test_size", "must be >= 1");
  if (!(drift.period >= 1.0)) throw ConfigError("drift.period", "must be >= 1");
  if (eval_every < 1) throw ConfigError("eval.every", "must be >= 1");
  if (!(dual.tol > 0.0)) throw ConfigError("baseline.tol", "must be > 0");
  if (dual.max_iters < 1) throw ConfigError("baseline.max_iters", "must be >= 1");
  if (experiment == ExperimentKind::Drift && window < 1) {
    throw ConfigError("solver.window", "drift experiments need a window >= 1");
  }
}

ExperimentConfig parse_config(std::string_view text, std::optional<ExperimentKind> implied) {
  std::vector<std::pair<std::string, Entry>> entries;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim_copy(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim_copy(std::string_view(line).substr(0, eq));
    std::string value = trim_copy(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    if (key != "experiment" && !setters().contains(key)) {
      throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(key, "duplicate key (line " + std::to_string(line_no) + ")");
    }
    entries.push_back({std::move(key), Entry{std::move(value), line_no}});
  }

  std::optional<ExperimentKind> kind = implied;
  for (const auto& [key, entry] : entries) {
    if (key != "experiment") continue;
    const ExperimentKind stated =
        wrap_enum(key, [&] { return parse_experiment_kind(entry.value); });
    if (implied && *implied != stated) {
      throw ConfigError(key, "config describes '" + entry.value + "' but '" +
                                 to_string(*implied) + "' was requested");
    }
    kind = stated;
  }

  ExperimentConfig config = default_config(kind.value_or(ExperimentKind::Stationary));
  for (const auto& [key, entry] : entries) {
    if (key == "experiment") continue;
    setters().at(key)(config, key, entry.value);
  }
  config.validate();
  return config;
}

ExperimentConfig load_config_file(const std::string& path, std::optional<ExperimentKind> implied) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), implied);
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment = " << to_string(c.experiment) << '\n'
    << "seed = " << c.seed << '\n'
    << "qubits = " << c.qubits << '\n'
    << "edges = " << c.edges << '\n'
    << "solver.lambda = " << format_double(c.lambda) << '\n'
    << "solver.iterations = " << c.iterations << '\n'
    << "solver.warmup = " << c.warmup << '\n'
    << "solver.window = " << c.window << '\n'
    << "solver.shots = " << c.shots << '\n'
    << "solver.theta0 = " << format_double(c.theta0) << '\n'
    << "spsa.mu = " << format_double(c.spsa.learning_rate) << '\n'
    << "spsa.c = " << format_double(c.spsa.perturbation) << '\n'
    << "spsa.decay = " << (c.spsa.decay ? "true" : "false") << '\n'
    << "data.theta_opt = " << format_double(c.theta_opt) << '\n'
    << "data.observable = " << to_string(c.observable) << '\n'
    << "data.label_qubit = " << c.label_qubit << '\n'
    << "data.proposal = " << to_string(c.proposal) << '\n'
    << "data.coset_noise = " << format_double(c.coset_noise) << '\n'
    << "data.coset_rx_range = " << format_double(c.coset_rx_range) << '\n'
    << "data.gamma = " << format_double(c.gamma) << '\n'
    << "data.b_mode = " << c.b_mode << '\n'
    << "data.b = " << format_double(c.b) << '\n'
    << "data.train_size = " << c.train_size << '\n'
    << "data.test_size = " << c.test_size << '\n'
    << "drift.period = " << format_double(c.drift.period) << '\n'
    << "drift.amplitude = " << format_double(c.drift.amplitude) << '\n'
    << "eval.every = " << c.eval_every << '\n'
    << "eval.primal = " << (c.eval_primal ? "true" : "false") << '\n'
    << "baseline.outer_iters = " << c.outer_iters << '\n'
    << "baseline.tol = " << format_double(c.dual.tol) << '\n'
    << "baseline.max_iters = " << c.dual.max_iters << '\n';
  if (!c.output.empty()) o << "output.path = " << c.output << '\n';
  return o.str();
}

SolverConfig solver_config(const ExperimentConfig& c) {
  SolverConfig s;
  s.lambda = c.lambda;
  s.window = c.window;
  s.warmup = c.warmup;
  s.shots = c.shots;
  s.spsa = c.spsa;
  return s;
}

CovariantDatasetSpec dataset_spec(const ExperimentConfig& c) {
  CovariantDatasetSpec spec;
  spec.num_qubits = c.qubits;
  spec.edges = parse_edges(c.edges, c.qubits);
  spec.theta_opt = c.theta_opt;
  spec.observable = c.observable;
  spec.label_qubit = c.label_qubit;
  spec.proposal = c.proposal;
  spec.coset_noise = c.coset_noise;
  spec.coset_rx_range = c.coset_rx_range;
  spec.margin = c.gamma;
  spec.threshold = c.b;
  spec.seed = c.seed;
  if (c.experiment == ExperimentKind::Drift) {
    std::vector<double> visited;
    for (int i = 0; i < 64; ++i) visited.push_back(drift_theta(c.drift.period * i / 64.0, c.drift));
    assign_references(spec, visited);
  } else {
    assign_references(spec);
  }
  if (c.b_mode == "median") {
    Rng probe_rng = make_rng(c.seed, 0xb0b5ULL);
    spec.threshold = median_threshold(spec, probe_rng);
  }
  return spec;
}

}  // namespace qka
