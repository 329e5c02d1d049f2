#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "qka/kernel.hpp"

using namespace qka;
using std::numbers::pi;

namespace {

const std::vector<double> kZero{0.0};

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

TEST(PseudoKernel, SelfOverlapIsOne) {
  Rng rng = make_rng(31);
  const auto m = covariant_map(3, chain_edges(3));
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = gen::angles(rng, 6);
    const auto th = gen::angles(rng, 1);
    EXPECT_NEAR(pseudo_kernel(m, x, th, x, th), 1.0, 1e-12);
  }
}

TEST(PseudoKernel, SingleQubitClosedForm) {
  const auto m = covariant_map(1, {});
  EXPECT_NEAR(kernel_value(m, std::vector<double>{pi / 2, 0}, std::vector<double>{0, 0}, kZero), 0.5,
              1e-12);
  Rng rng = make_rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = gen::angle(rng);
    const double b = gen::angle(rng);
    const double want = std::pow(std::cos((a - b) / 2), 2);
    EXPECT_NEAR(pseudo_kernel(m, std::vector<double>{a, 0}, kZero, std::vector<double>{b, 0}, kZero),
                want, 1e-12);
  }
}

TEST(PseudoKernel, SwapSymmetryAndRange) {
  Rng rng = make_rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen::index_below(rng, 4);
    const auto m = covariant_map(n, gen::edges(rng, n));
    const auto x = gen::angles(rng, 2 * n);
    const auto y = gen::angles(rng, 2 * n);
    const auto ta = gen::angles(rng, 1);
    const auto tb = gen::angles(rng, 1);
    const double k = pseudo_kernel(m, x, ta, y, tb);
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, 1.0);
    EXPECT_NEAR(k, pseudo_kernel(m, y, tb, x, ta), 1e-12);
  }
}

TEST(PseudoKernel, DimensionMismatch) {
  const auto m = covariant_map(2, chain_edges(2));
  EXPECT_THROW(pseudo_kernel(m, std::vector<double>(4), kZero, std::vector<double>(3), kZero),
               std::invalid_argument);
}

TEST(ComposedCircuit, AgreesWithTwoStatePath) {
  Rng rng = make_rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + gen::index_below(rng, 4);
    const auto m = covariant_map(n, gen::edges(rng, n));
    const auto x = gen::angles(rng, 2 * n);
    const auto y = gen::angles(rng, 2 * n);
    const auto ta = gen::angles(rng, 1);
    const auto tb = gen::angles(rng, 1);
    EXPECT_NEAR(composed_circuit_fidelity(m, x, ta, y, tb), pseudo_kernel(m, x, ta, y, tb), 1e-10);
  }
}

TEST(ComposedCircuit, LayeredMapsToo) {
  Rng rng = make_rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t q = 1 + gen::index_below(rng, 4);
    const auto m = gen::layered_map(rng, q, 3, 2, 5);
    const auto x = gen::angles(rng, 3);
    const auto y = gen::angles(rng, 3);
    const auto ta = gen::angles(rng, 2);
    const auto tb = gen::angles(rng, 2);
    EXPECT_NEAR(composed_circuit_fidelity(m, x, ta, y, tb), pseudo_kernel(m, x, ta, y, tb), 1e-10);
  }
}

TEST(KernelSampled, DegenerateProbabilities) {
  const auto m = covariant_map(1, {});
  Rng rng = make_rng(36);
  const std::vector<double> x{0.3, 0.2};
  for (std::size_t r : {1u, 7u, 1000u}) {
    const auto same = kernel_sampled(m, x, kZero, x, kZero, r, rng);
    EXPECT_EQ(same.value, 1.0);
    EXPECT_EQ(same.all_zero_count, r);
    EXPECT_EQ(same.shots, r);
  }
  // RX(pi)|0> is orthogonal to |0>.
  const auto orth = kernel_sampled(m, std::vector<double>{pi, 0}, kZero, std::vector<double>{0, 0},
                                   kZero, 500, rng);
  EXPECT_EQ(orth.value, 0.0);
}

TEST(KernelSampled, HalfProbabilityConcentrates) {
  const auto m = covariant_map(1, {});
  const std::vector<double> x{pi / 2, 0};
  const std::vector<double> y{0, 0};
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng = make_rng(seed, 99);
    const auto est = kernel_sampled(m, x, kZero, y, kZero, 10000, rng);
    EXPECT_EQ(est.value, static_cast<double>(est.all_zero_count) / 10000.0);
    if (std::abs(est.value - 0.5) <= 0.015) ++inside;
  }
  // 3 sigma covers ~99.7%, so ~0.8 of 300 fall outside on average; seven
  // or more misses has probability ~1e-4.
  EXPECT_GE(inside, 294);
}

TEST(KernelSampled, Unbiased) {
  const auto m = covariant_map(2, chain_edges(2));
  Rng draw = make_rng(37);
  for (int instance = 0; instance < 5; ++instance) {
    const auto x = gen::angles(draw, 4);
    const auto y = gen::angles(draw, 4);
    const auto ta = gen::angles(draw, 1);
    const auto tb = gen::angles(draw, 1);
    const double p = pseudo_kernel(m, x, ta, y, tb);
    const std::size_t shots = 200;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng = make_rng(seed, 1000 + static_cast<std::uint64_t>(instance));
      sum += kernel_sampled(m, x, ta, y, tb, shots, rng).value;
    }
    const double bound = 4.0 * std::sqrt(p * (1 - p) / (1000.0 * shots)) + 1e-12;
    EXPECT_NEAR(sum / 1000.0, p, bound) << "instance " << instance << " p=" << p;
  }
}

TEST(KernelSampled, RejectsZeroShots) {
  const auto m = covariant_map(1, {});
  Rng rng = make_rng(38);
  EXPECT_THROW(kernel_sampled(m, std::vector<double>{0, 0}, kZero, std::vector<double>{0, 0}, kZero,
                              0, rng),
               std::invalid_argument);
}

TEST(KernelMatrix, SinglePoint) {
  const auto m = covariant_map(2, chain_edges(2));
  const std::vector<DataVector> pts{{0.1, 0.2, 0.3, 0.4}};
  const auto k = kernel_matrix(m, pts, kZero);
  ASSERT_EQ(k.rows(), 1u);
  EXPECT_EQ(k(0, 0), 1.0);
}

TEST(KernelMatrix, SymmetricUnitDiagonalPsd) {
  Rng rng = make_rng(39);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + gen::index_below(rng, 4);
    const std::size_t count = 1 + gen::index_below(rng, 20);
    const auto m = covariant_map(n, chain_edges(n));
    std::vector<DataVector> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(gen::angles(rng, 2 * n));
    const auto k = kernel_matrix(m, pts, gen::angles(rng, 1));
    for (std::size_t i = 0; i < count; ++i) {
      EXPECT_NEAR(k(i, i), 1.0, 1e-12);
      for (std::size_t j = 0; j < count; ++j) EXPECT_EQ(k(i, j), k(j, i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(k));
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(KernelEvaluator, CountsExactAndSampledSeparately) {
  const auto m = covariant_map(1, {});
  const auto a = prepare_feature_state(m, std::vector<double>{0.4, 0.1}, kZero);
  const auto b = prepare_feature_state(m, std::vector<double>{1.4, 0.1}, kZero);
  KernelEvaluator exact;
  for (int i = 0; i < 3; ++i) exact(a, b);
  EXPECT_EQ(exact.counts().exact, 3u);
  EXPECT_EQ(exact.counts().sampled, 0u);
  EXPECT_NEAR(exact(a, b), fidelity(a, b), 0.0);

  KernelEvaluator noisy(64, 5);
  for (int i = 0; i < 4; ++i) noisy(a, b);
  EXPECT_EQ(noisy.counts().sampled, 4u);
  EXPECT_EQ(noisy.counts().exact, 0u);
  EXPECT_EQ(noisy.counts().total(), 4u);
  noisy.reset_counts();
  EXPECT_EQ(noisy.counts().total(), 0u);
}

TEST(KernelEvaluator, SampledValuesAreShotFractions) {
  const auto m = covariant_map(1, {});
  const auto a = prepare_feature_state(m, std::vector<double>{0.9, 0.0}, kZero);
  const auto b = prepare_feature_state(m, std::vector<double>{0.0, 0.0}, kZero);
  KernelEvaluator noisy(50, 8);
  for (int i = 0; i < 20; ++i) {
    const double v = noisy(a, b) * 50.0;
    EXPECT_NEAR(v, std::round(v), 1e-9);
  }
}

TEST(KernelEvaluator, SameSeedSameStream) {
  const auto m = covariant_map(1, {});
  const auto a = prepare_feature_state(m, std::vector<double>{0.9, 0.0}, kZero);
  const auto b = prepare_feature_state(m, std::vector<double>{0.2, 0.0}, kZero);
  KernelEvaluator one(100, 3);
  KernelEvaluator two(100, 3);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(one(a, b), two(a, b));
}
