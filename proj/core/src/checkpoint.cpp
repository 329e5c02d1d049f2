#include "qka/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qka/text.hpp"

namespace qka {

namespace {

std::string expect_line(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    line = trim_copy(line);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens(line);
    std::string first;
    tokens >> first;
    if (first != key) {
      throw std::invalid_argument("checkpoint: expected '" + key + "', got '" + first + "'");
    }
    std::string rest;
    std::getline(tokens, rest);
    return trim_copy(rest);
  }
  throw std::invalid_argument("checkpoint: missing '" + key + "'");
}

std::vector<double> parse_doubles(const std::string& text) {
  std::istringstream in(text);
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(parse_double(token));
  return values;
}

}  // namespace

void save_model(std::ostream& out, const AlignedModel& model) {
  const auto& cfg = model.config();
  out << "qka-model 1\n";
  out << "lambda " << format_double(cfg.lambda) << '\n';
  out << "window " << cfg.window << '\n';
  out << "warmup " << cfg.warmup << '\n';
  out << "shots " << cfg.shots << '\n';
  out << "spsa " << format_double(cfg.spsa.learning_rate) << ' '
      << format_double(cfg.spsa.perturbation) << ' ' << (cfg.spsa.decay ? 1 : 0) << ' '
      << model.optimizer().step_count() << '\n';
  out << "step " << model.current_step() << '\n';
  out << "theta";
  for (const double v : model.theta()) out << ' ' << format_double(v);
  out << "\nmap\n" << to_text(model.map());
  out << "records " << model.records().size() << '\n';
  for (const auto& r : model.records()) {
    out << r.step << ' ' << r.data_index << ' ' << r.label;
    for (const double v : r.theta) out << ' ' << format_double(v);
    for (const double v : r.x) out << ' ' << format_double(v);
    out << '\n';
  }
}

AlignedModel load_model(std::istream& in) {
  if (expect_line(in, "qka-model") != "1") {
    throw std::invalid_argument("checkpoint: unsupported version");
  }
  SolverConfig cfg;
  cfg.lambda = parse_double(expect_line(in, "lambda"));
  cfg.window = static_cast<std::size_t>(parse_integer(expect_line(in, "window")));
  cfg.warmup = static_cast<std::size_t>(parse_integer(expect_line(in, "warmup")));
  cfg.shots = static_cast<std::size_t>(parse_integer(expect_line(in, "shots")));

  std::istringstream spsa(expect_line(in, "spsa"));
  std::string mu, c, decay, count;
  spsa >> mu >> c >> decay >> count;
  cfg.spsa.learning_rate = parse_double(mu);
  cfg.spsa.perturbation = parse_double(c);
  cfg.spsa.decay = parse_integer(decay) != 0;
  const auto spsa_steps = static_cast<std::size_t>(parse_integer(count));

  const auto step = static_cast<std::size_t>(parse_integer(expect_line(in, "step")));
  std::vector<double> theta = parse_doubles(expect_line(in, "theta"));
  expect_line(in, "map");

  std::string map_text, line;
  while (std::getline(in, line)) {
    map_text += line + '\n';
    if (trim_copy(line) == "end") break;
  }
  TrainableFeatureMap map = map_from_text(map_text);
  const std::size_t d = map.param_dim();
  const std::size_t r = map.data_dim();

  AlignedModel model(std::move(map), cfg, std::move(theta));
  model.set_step(step);
  model.optimizer().set_step_count(spsa_steps);

  const auto count_records = static_cast<std::size_t>(parse_integer(expect_line(in, "records")));
  for (std::size_t i = 0; i < count_records; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("checkpoint: truncated records");
    std::istringstream tokens(line);
    std::string t, idx, y;
    tokens >> t >> idx >> y;
    std::string rest;
    std::getline(tokens, rest);
    std::vector<double> values = parse_doubles(rest);
    if (values.size() != d + r) {
      throw std::invalid_argument("checkpoint: record " + std::to_string(i) + " has " +
                                  std::to_string(values.size()) + " values, expected " +
                                  std::to_string(d + r));
    }
    model.append_record(static_cast<std::size_t>(parse_integer(t)),
                        static_cast<std::size_t>(parse_integer(idx)),
                        DataVector(values.begin() + static_cast<std::ptrdiff_t>(d), values.end()),
                        static_cast<int>(parse_integer(y)),
                        std::vector<double>(values.begin(),
                                            values.begin() + static_cast<std::ptrdiff_t>(d)));
  }
  return model;
}

void save_model_file(const std::string& path, const AlignedModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  save_model(out, model);
}

AlignedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file '" + path + "'");
  return load_model(in);
}

}  // namespace qka
