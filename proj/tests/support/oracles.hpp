#pragma once

// Reference implementations that share no code with the library's
// simulation kernels. They are slow and only meant for small q.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qka/feature_map.hpp"
#include "qka/pegasos.hpp"

namespace qka::oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CMat pauli(char p) {
  CMat m(2, 2);
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = CMat::Identity(2, 2);
  }
  return m;
}

/// exp(-i phi P / 2) = cos(phi/2) I - i sin(phi/2) P.
inline CMat rotation(char axis, double phi) {
  return std::cos(phi / 2) * CMat::Identity(2, 2) - cd(0, 1) * std::sin(phi / 2) * pauli(axis);
}

/// Embeds a one-qubit operator on `qubit`. Amplitude bit k is qubit k, so
/// qubit 0 is the least significant factor of the Kronecker product.
inline CMat embed(const CMat& op, std::size_t qubit, std::size_t q) {
  CMat out = CMat::Identity(1, 1);
  for (std::size_t k = q; k-- > 0;) out = kron(out, k == qubit ? op : CMat::Identity(2, 2));
  return out;
}

inline CMat cnot(std::size_t control, std::size_t target, std::size_t q) {
  const std::size_t dim = std::size_t{1} << q;
  CMat m = CMat::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t j = (i >> control & 1) ? i ^ (std::size_t{1} << target) : i;
    m(j, i) = 1.0;
  }
  return m;
}

inline CVec zero(std::size_t q) {
  CVec v = CVec::Zero(std::size_t{1} << q);
  v(0) = 1.0;
  return v;
}

/// Full circuit unitary for a map at (x, theta), built gate by gate.
inline CMat circuit(const TrainableFeatureMap& map, std::span<const double> x,
                    std::span<const double> theta) {
  const std::size_t q = map.num_qubits();
  CMat u = CMat::Identity(std::size_t{1} << q, std::size_t{1} << q);
  for (const auto& layer : map.layers()) {
    for (const auto& g : layer.gates) {
      if (g.kind == GateKind::CNOT) {
        u = cnot(g.qubit, g.target, q) * u;
        continue;
      }
      const double phi = g.source == AngleSource::Data    ? x[g.index]
                         : g.source == AngleSource::Param ? theta[g.index]
                                                          : g.value;
      const char axis = g.kind == GateKind::RX ? 'X' : g.kind == GateKind::RY ? 'Y' : 'Z';
      u = embed(rotation(axis, phi), g.qubit, q) * u;
    }
  }
  return u;
}

/// Covariant state written out from its definition, independent of the
/// library's layer representation.
inline CVec covariant_state(std::size_t n, std::span<const Edge> edges, std::span<const double> x,
                            double theta) {
  CVec s = zero(n);
  for (std::size_t k = 0; k < n; ++k) s = embed(rotation('Y', theta), k, n) * s;
  for (const auto& [c, t] : edges) s = cnot(c, t, n) * s;
  for (std::size_t k = 0; k < n; ++k) {
    s = embed(rotation('Z', x[2 * k + 1]), k, n) * s;
    s = embed(rotation('X', x[2 * k]), k, n) * s;
  }
  return s;
}

inline CVec to_eigen(const StateVector& s) {
  CVec v(s.amplitudes().size());
  for (std::size_t i = 0; i < s.amplitudes().size(); ++i) v(i) = s[i];
  return v;
}

/// Real 4^q vector v with v_P = Tr(rho P) / sqrt(2^q) over Pauli strings P,
/// so that <v_a, v_b> = Tr(rho_a rho_b).
inline Eigen::VectorXd density_features(const CVec& psi, std::size_t q) {
  const CMat rho = psi * psi.adjoint();
  const std::size_t count = std::size_t{1} << (2 * q);
  Eigen::VectorXd v(count);
  const char letters[4] = {'I', 'X', 'Y', 'Z'};
  for (std::size_t code = 0; code < count; ++code) {
    CMat p = CMat::Identity(1, 1);
    std::size_t c = code;
    for (std::size_t k = 0; k < q; ++k) {
      p = kron(pauli(letters[c & 3]), p);
      c >>= 2;
    }
    v(code) = (rho * p).trace().real() / std::sqrt(static_cast<double>(std::size_t{1} << q));
  }
  return v;
}

/// <w, phi(x)> with w materialized from the records.
inline double materialized_decision(const AlignedModel& model, std::span<const double> x,
                                    std::span<const double> theta_eval) {
  const std::size_t q = model.map().num_qubits();
  if (model.records().empty()) return 0.0;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(std::size_t{1} << (2 * q));
  for (const auto& r : model.records()) {
    const CVec psi = circuit(model.map(), r.x, r.theta) * zero(q);
    w += r.label * density_features(psi, q);
  }
  w /= model.config().lambda * model.normalization();
  const CVec query = circuit(model.map(), x, theta_eval) * zero(q);
  return w.dot(density_features(query, q));
}

/// Exhaustive maximization of the dual objective over [0, hi]^2.
struct GridResult {
  double a0 = 0.0;
  double a1 = 0.0;
  double value = -1e300;
};

inline GridResult dual_grid_2(const double k[2][2], const int y[2], double lambda, double step,
                              double hi) {
  GridResult best;
  const int steps = static_cast<int>(hi / step + 0.5);
  for (int i = 0; i <= steps; ++i) {
    const double a = i * step;
    for (int j = 0; j <= steps; ++j) {
      const double b = j * step;
      const double quad = a * a * k[0][0] + b * b * k[1][1] + 2 * a * b * y[0] * y[1] * k[0][1];
      const double v = a + b - 0.5 * quad - 0.5 * lambda * (a * a + b * b);
      if (v > best.value) best = {a, b, v};
    }
  }
  return best;
}

}  // namespace qka::oracle
