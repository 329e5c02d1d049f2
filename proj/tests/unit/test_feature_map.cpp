#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "oracles.hpp"
#include "qka/feature_map.hpp"

using namespace qka;
using std::numbers::pi;

namespace {

void expect_state(const StateVector& s, const oracle::CVec& ref, double tol = 1e-10) {
  ASSERT_EQ(s.dimension(), static_cast<std::size_t>(ref.size()));
  for (std::size_t i = 0; i < s.dimension(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - ref(static_cast<Eigen::Index>(i))), 0.0, tol) << "amp " << i;
  }
}

}  // namespace

TEST(CovariantMap, Dimensions) {
  const auto m = covariant_map(2, {{0, 1}});
  EXPECT_EQ(m.data_dim(), 4u);
  EXPECT_EQ(m.param_dim(), 1u);
  EXPECT_EQ(m.num_qubits(), 2u);
}

TEST(CovariantMap, IdentityAtZero) {
  const auto m = covariant_map(1, {});
  const auto s = prepare_feature_state(m, std::vector<double>{0, 0}, std::vector<double>{0});
  EXPECT_NEAR(s[0].real(), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-12);

  const auto m3 = covariant_map(3, chain_edges(3));
  const auto z = prepare_feature_state(m3, std::vector<double>(6, 0.0), std::vector<double>{0});
  EXPECT_NEAR(std::abs(z[0]), 1.0, 1e-12);
}

TEST(CovariantMap, SingleRy) {
  const auto m = covariant_map(1, {});
  const auto s = prepare_feature_state(m, std::vector<double>{0, 0}, std::vector<double>{pi / 2});
  EXPECT_NEAR(s[0].real(), std::cos(pi / 4), 1e-12);
  EXPECT_NEAR(s[1].real(), std::sin(pi / 4), 1e-12);
}

TEST(CovariantMap, SingleRx) {
  const auto m = covariant_map(1, {});
  const auto s = prepare_feature_state(m, std::vector<double>{pi, 0}, std::vector<double>{0});
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-12);
  EXPECT_NEAR(s[1].imag(), -1.0, 1e-12);
}

TEST(CovariantMap, RejectsBadEdges) {
  EXPECT_THROW(covariant_map(2, {{0, 2}}), std::invalid_argument);
  EXPECT_THROW(covariant_map(2, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(covariant_map(0, {}), std::invalid_argument);
}

TEST(CovariantMap, MatchesDefinitionOracle) {
  Rng rng = make_rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + gen::index_below(rng, 4);
    const auto edges = gen::edges(rng, n);
    const auto m = covariant_map(n, edges);
    const auto x = gen::angles(rng, 2 * n);
    const double theta = gen::angle(rng);
    expect_state(prepare_feature_state(m, x, std::vector<double>{theta}),
                 oracle::covariant_state(n, edges, x, theta));
  }
}

TEST(PrepareFeatureState, Normalized) {
  Rng rng = make_rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + gen::index_below(rng, 5);
    const auto m = covariant_map(n, chain_edges(n));
    const auto s = prepare_feature_state(m, gen::angles(rng, 2 * n), gen::angles(rng, 1));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
  }
}

TEST(PrepareFeatureState, DimensionMismatch) {
  const auto m = covariant_map(2, chain_edges(2));
  EXPECT_THROW(prepare_feature_state(m, std::vector<double>(3), std::vector<double>{0}),
               std::invalid_argument);
  EXPECT_THROW(prepare_feature_state(m, std::vector<double>(4), std::vector<double>{0, 1}),
               std::invalid_argument);
}

TEST(LayeredMap, MatchesDenseOracle) {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t q = 1 + gen::index_below(rng, 3);
    const std::size_t d = 1 + gen::index_below(rng, 3);
    const auto m = gen::layered_map(rng, q, 3, d);
    const auto x = gen::angles(rng, 3);
    const auto th = gen::angles(rng, d);
    expect_state(prepare_feature_state(m, x, th), oracle::circuit(m, x, th) * oracle::zero(q));
  }
}

TEST(LayeredMap, InverseUndoesApply) {
  Rng rng = make_rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t q = 1 + gen::index_below(rng, 4);
    const auto m = gen::layered_map(rng, q, 2, 2, 6);
    const auto x = gen::angles(rng, 2);
    const auto th = gen::angles(rng, 2);
    StateVector s = gen::random_state(rng, q);
    const StateVector before = s;
    m.apply(s, x, th);
    m.apply_inverse(s, x, th);
    EXPECT_NEAR(fidelity(s, before), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(inner_product(s, before) - Complex(1.0)), 0.0, 1e-10);
  }
}

TEST(LayeredMap, RejectsOutOfRangeIndices) {
  Layer data{LayerKind::Data, {Gate{GateKind::RX, 0, 0, AngleSource::Data, 2, 0.0}}};
  EXPECT_THROW(TrainableFeatureMap(1, 2, 1, {data}), std::invalid_argument);
  Layer param{LayerKind::Trainable, {Gate{GateKind::RY, 0, 0, AngleSource::Param, 1, 0.0}}};
  EXPECT_THROW(TrainableFeatureMap(1, 2, 1, {param}), std::invalid_argument);
  Layer qubit{LayerKind::Data, {Gate{GateKind::RZ, 3, 0, AngleSource::Constant, 0, 0.5}}};
  EXPECT_THROW(TrainableFeatureMap(2, 2, 1, {qubit}), std::invalid_argument);
}

TEST(MapText, RoundTripCovariant) {
  const auto m = covariant_map(3, {{0, 1}, {2, 0}});
  const auto back = map_from_text(to_text(m));
  EXPECT_EQ(back, m);
  EXPECT_EQ(to_text(back), to_text(m));
}

TEST(MapText, RoundTripRandomLayered) {
  Rng rng = make_rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = gen::layered_map(rng, 1 + gen::index_below(rng, 4), 3, 2);
    EXPECT_EQ(map_from_text(to_text(m)), m);
  }
}

TEST(MapText, ConstantAnglesSurvive) {
  Layer l{LayerKind::Trainable, {Gate{GateKind::RZ, 0, 0, AngleSource::Constant, 0, 0.1 + 0.2}}};
  const TrainableFeatureMap m(1, 0, 1, {l});
  EXPECT_EQ(map_from_text(to_text(m)).layers()[0].gates[0].value, 0.1 + 0.2);
}

TEST(MapText, RejectsGarbage) {
  EXPECT_THROW(map_from_text("not a map"), std::invalid_argument);
  EXPECT_THROW(map_from_text("qka-feature-map 1\nqubits 1\n"), std::invalid_argument);
}

TEST(Edges, ParseAndFormat) {
  EXPECT_EQ(parse_edges("chain", 3), chain_edges(3));
  EXPECT_TRUE(parse_edges("none", 3).empty());
  const auto e = parse_edges("0-2, 2-1", 3);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0], Edge(0, 2));
  EXPECT_EQ(format_edges(e), "0-2,2-1");
  EXPECT_EQ(format_edges({}), "none");
  EXPECT_THROW(parse_edges("0-3", 3), std::invalid_argument);
  EXPECT_THROW(parse_edges("0:1", 3), std::invalid_argument);
}
