#include "qka/feature_map.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace qka {

namespace {

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::CNOT: return "cnot";
  }
  return "?";
}

Axis axis_of(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return Axis::X;
    case GateKind::RY: return Axis::Y;
    default: return Axis::Z;
  }
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_index(std::string_view token, std::string_view what) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("feature map: bad " + std::string(what) + " '" +
                                std::string(token) + "'");
  }
  return value;
}

}  // namespace

TrainableFeatureMap::TrainableFeatureMap(std::size_t num_qubits, std::size_t data_dim,
                                         std::size_t param_dim, std::vector<Layer> layers,
                                         std::vector<Edge> edges)
    : num_qubits_(num_qubits),
      data_dim_(data_dim),
      param_dim_(param_dim),
      layers_(std::move(layers)),
      edges_(std::move(edges)) {
  if (num_qubits_ < 1 || num_qubits_ > kMaxQubits) {
    throw std::invalid_argument("feature map: qubit count out of range");
  }
  check_edges(edges_, num_qubits_);
  for (const auto& layer : layers_) {
    for (const auto& g : layer.gates) {
      if (g.qubit >= num_qubits_) {
        throw std::invalid_argument("feature map: gate qubit out of range");
      }
      if (g.kind == GateKind::CNOT) {
        if (g.target >= num_qubits_ || g.target == g.qubit) {
          throw std::invalid_argument("feature map: invalid cnot target");
        }
        continue;
      }
      if (g.source == AngleSource::Data && g.index >= data_dim_) {
        throw std::invalid_argument("feature map: data index " + std::to_string(g.index) +
                                    " >= data_dim " + std::to_string(data_dim_));
      }
      if (g.source == AngleSource::Param && g.index >= param_dim_) {
        throw std::invalid_argument("feature map: parameter index " + std::to_string(g.index) +
                                    " >= param_dim " + std::to_string(param_dim_));
      }
    }
  }
}

void TrainableFeatureMap::check_dimensions(std::span<const double> x,
                                           std::span<const double> theta) const {
  if (x.size() != data_dim_) {
    throw std::invalid_argument("feature map expects " + std::to_string(data_dim_) +
                                " data components, got " + std::to_string(x.size()));
  }
  if (theta.size() != param_dim_) {
    throw std::invalid_argument("feature map expects " + std::to_string(param_dim_) +
                                " parameters, got " + std::to_string(theta.size()));
  }
}

double TrainableFeatureMap::angle_of(const Gate& g, std::span<const double> x,
                                     std::span<const double> theta) const {
  switch (g.source) {
    case AngleSource::Data: return x[g.index];
    case AngleSource::Param: return theta[g.index];
    case AngleSource::Constant: return g.value;
  }
  return 0.0;
}

void TrainableFeatureMap::apply(StateVector& state, std::span<const double> x,
                                std::span<const double> theta) const {
  check_dimensions(x, theta);
  if (state.num_qubits() != num_qubits_) {
    throw std::invalid_argument("feature map applied to state of wrong size");
  }
  for (const auto& layer : layers_) {
    for (const auto& g : layer.gates) {
      if (g.kind == GateKind::CNOT) {
        state.cnot(g.qubit, g.target);
      } else {
        state.rotate(axis_of(g.kind), angle_of(g, x, theta), g.qubit);
      }
    }
  }
}

void TrainableFeatureMap::apply_inverse(StateVector& state, std::span<const double> x,
                                        std::span<const double> theta) const {
  check_dimensions(x, theta);
  if (state.num_qubits() != num_qubits_) {
    throw std::invalid_argument("feature map applied to state of wrong size");
  }
  for (auto layer = layers_.rbegin(); layer != layers_.rend(); ++layer) {
    for (auto g = layer->gates.rbegin(); g != layer->gates.rend(); ++g) {
      if (g->kind == GateKind::CNOT) {
        state.cnot(g->qubit, g->target);
      } else {
        state.rotate(axis_of(g->kind), -angle_of(*g, x, theta), g->qubit);
      }
    }
  }
}

std::vector<Edge> chain_edges(std::size_t num_qubits) {
  std::vector<Edge> edges;
  for (std::size_t k = 0; k + 1 < num_qubits; ++k) edges.emplace_back(k, k + 1);
  return edges;
}

void check_edges(std::span<const Edge> edges, std::size_t num_qubits) {
  for (const auto& [a, b] : edges) {
    if (a >= num_qubits || b >= num_qubits || a == b) {
      throw std::invalid_argument("invalid edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") for " + std::to_string(num_qubits) + " qubits");
    }
  }
}

TrainableFeatureMap covariant_map(std::size_t num_qubits, std::vector<Edge> edges) {
  if (num_qubits < 1) throw std::invalid_argument("covariant_map: need at least one qubit");
  check_edges(edges, num_qubits);

  Layer trainable{LayerKind::Trainable, {}};
  for (std::size_t k = 0; k < num_qubits; ++k) {
    trainable.gates.push_back({GateKind::RY, k, 0, AngleSource::Param, 0, 0.0});
  }
  for (const auto& [c, t] : edges) {
    trainable.gates.push_back({GateKind::CNOT, c, t, AngleSource::Constant, 0, 0.0});
  }

  Layer data{LayerKind::Data, {}};
  for (std::size_t k = 0; k < num_qubits; ++k) {
    data.gates.push_back({GateKind::RZ, k, 0, AngleSource::Data, 2 * k + 1, 0.0});
    data.gates.push_back({GateKind::RX, k, 0, AngleSource::Data, 2 * k, 0.0});
  }

  return TrainableFeatureMap(num_qubits, 2 * num_qubits, 1, {trainable, data}, std::move(edges));
}

StateVector prepare_feature_state(const TrainableFeatureMap& map, std::span<const double> x,
                                  std::span<const double> theta) {
  StateVector state(map.num_qubits());
  map.apply(state, x, theta);
  return state;
}

std::string format_edges(std::span<const Edge> edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(edges[i].first) + "-" + std::to_string(edges[i].second);
  }
  return out.empty() ? "none" : out;
}

std::vector<Edge> parse_edges(std::string_view text, std::size_t num_qubits) {
  const std::string spec = trim(text);
  if (spec == "chain") return chain_edges(num_qubits);
  std::vector<Edge> edges;
  if (spec.empty() || spec == "none") return edges;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw std::invalid_argument("edge '" + item + "' must look like a-b");
    }
    edges.emplace_back(parse_index(std::string_view(item).substr(0, dash), "edge"),
                       parse_index(std::string_view(item).substr(dash + 1), "edge"));
  }
  check_edges(edges, num_qubits);
  return edges;
}

std::string to_text(const TrainableFeatureMap& map) {
  std::ostringstream out;
  out.precision(17);
  out << "qka-feature-map 1\n";
  out << "qubits " << map.num_qubits() << "\n";
  out << "data_dim " << map.data_dim() << "\n";
  out << "param_dim " << map.param_dim() << "\n";
  out << "edges " << format_edges(map.edges()) << "\n";
  for (const auto& layer : map.layers()) {
    out << "layer " << (layer.kind == LayerKind::Data ? "data" : "trainable") << "\n";
    for (const auto& g : layer.gates) {
      out << "  " << gate_name(g.kind) << ' ' << g.qubit;
      if (g.kind == GateKind::CNOT) {
        out << ' ' << g.target;
      } else if (g.source == AngleSource::Data) {
        out << " data " << g.index;
      } else if (g.source == AngleSource::Param) {
        out << " param " << g.index;
      } else {
        out << " const " << g.value;
      }
      out << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

TrainableFeatureMap map_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t qubits = 0, data_dim = 0, param_dim = 0;
  std::string edge_text = "none";
  std::vector<Layer> layers;
  bool header = false, ended = false;

  while (std::getline(in, line)) {
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::istringstream tokens(trimmed);
    std::string key;
    tokens >> key;
    if (!header) {
      std::string version;
      tokens >> version;
      if (key != "qka-feature-map" || version != "1") {
        throw std::invalid_argument("feature map: missing 'qka-feature-map 1' header");
      }
      header = true;
      continue;
    }
    if (key == "qubits") {
      tokens >> qubits;
    } else if (key == "data_dim") {
      tokens >> data_dim;
    } else if (key == "param_dim") {
      tokens >> param_dim;
    } else if (key == "edges") {
      tokens >> edge_text;
    } else if (key == "layer") {
      std::string kind;
      tokens >> kind;
      if (kind != "data" && kind != "trainable") {
        throw std::invalid_argument("feature map: unknown layer kind '" + kind + "'");
      }
      layers.push_back({kind == "data" ? LayerKind::Data : LayerKind::Trainable, {}});
    } else if (key == "rx" || key == "ry" || key == "rz" || key == "cnot") {
      if (layers.empty()) throw std::invalid_argument("feature map: gate outside a layer");
      Gate g;
      g.kind = key == "rx"   ? GateKind::RX
               : key == "ry" ? GateKind::RY
               : key == "rz" ? GateKind::RZ
                             : GateKind::CNOT;
      std::string a, b;
      tokens >> a >> b;
      g.qubit = parse_index(a, "qubit");
      if (g.kind == GateKind::CNOT) {
        g.target = parse_index(b, "target");
      } else {
        std::string c;
        tokens >> c;
        if (b == "data") {
          g.source = AngleSource::Data;
          g.index = parse_index(c, "index");
        } else if (b == "param") {
          g.source = AngleSource::Param;
          g.index = parse_index(c, "index");
        } else if (b == "const") {
          g.source = AngleSource::Constant;
          g.value = std::stod(c);
        } else {
          throw std::invalid_argument("feature map: unknown angle source '" + b + "'");
        }
      }
      layers.back().gates.push_back(g);
    } else if (key == "end") {
      ended = true;
      break;
    } else {
      throw std::invalid_argument("feature map: unknown directive '" + key + "'");
    }
  }
  if (!header || !ended) throw std::invalid_argument("feature map: truncated document");
  return TrainableFeatureMap(qubits, data_dim, param_dim, std::move(layers),
                             parse_edges(edge_text, qubits));
}

}  // namespace qka
