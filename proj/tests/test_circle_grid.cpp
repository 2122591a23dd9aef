#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgeom/errors.hpp"

using namespace wgeom;
using wgeom::testing::cosine;
using wgeom::testing::sine;

TEST(Grid, RejectsOddOrTinySizes) {
  EXPECT_THROW(make_grid(15), ConfigError);
  EXPECT_THROW(make_grid(8), ConfigError);
  EXPECT_NO_THROW(make_grid(16));
}

TEST(Grid, NodesAndWeights) {
  const GridSpec g = make_grid(64);
  EXPECT_DOUBLE_EQ(g.weight(), 1.0 / 64);
  EXPECT_DOUBLE_EQ(g.node(16), kTwoPi / 4);
  EXPECT_EQ(g.max_mode(), 31);
}

TEST(Grid, QuadratureIsExactForTrigPolynomials) {
  const GridSpec g = make_grid(32);
  EXPECT_NEAR(integrate(cosine(g, 3) * cosine(g, 3)), 0.5, 1e-15);
  EXPECT_NEAR(integrate(cosine(g, 3) * sine(g, 3)), 0.0, 1e-15);
  EXPECT_NEAR(integrate(cosine(g, 5)), 0.0, 1e-15);
}

TEST(Grid, SpectralDerivatives) {
  const GridSpec g = make_grid(64);
  for (int k = 1; k < 20; ++k) {
    EXPECT_LT((deriv(sine(g, k)) - cosine(g, k, k)).max_abs(), 1e-11 * k) << k;
    EXPECT_LT((deriv(sine(g, k), 2) + sine(g, k, k * k)).max_abs(), 1e-10 * k * k) << k;
  }
}

TEST(Grid, ShiftMovesTheInterpolant) {
  const GridSpec g = make_grid(64);
  const ScalarField f = cosine(g, 2) + sine(g, 5, 0.3);
  const ScalarField moved = shifted(f, 0.37);
  const ScalarField expected =
      sample(g, [](double x) { return std::cos(2 * (x + 0.37)) + 0.3 * std::sin(5 * (x + 0.37)); });
  EXPECT_LT((moved - expected).max_abs(), 1e-13);
}

TEST(Grid, ShapeMismatchThrows) {
  ScalarField a(make_grid(16));
  ScalarField b(make_grid(32));
  EXPECT_THROW(a += b, ShapeError);
}

TEST(Basis, OrderingAndLabels) {
  EXPECT_EQ(basis_index(0).mode, 1);
  EXPECT_EQ(basis_index(0).parity, Parity::Cos);
  EXPECT_EQ(basis_index(3).mode, 2);
  EXPECT_EQ(basis_index(3).parity, Parity::Sin);
  EXPECT_EQ(basis_position(3, Parity::Sin), 5);
  EXPECT_EQ(basis_ordering(2).size(), 4u);
}

TEST(Basis, IsOrthonormal) {
  const GridSpec g = make_grid(64);
  const int N = 10;
  for (int i = 0; i < 2 * N; ++i)
    for (int j = 0; j < 2 * N; ++j) {
      const ScalarField a = basis(basis_index(i).mode, basis_index(i).parity, g);
      const ScalarField b = basis(basis_index(j).mode, basis_index(j).parity, g);
      EXPECT_NEAR(integrate(a * b), i == j ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Basis, AliasedModesThrow) {
  const GridSpec g = make_grid(32);
  EXPECT_THROW(basis(16, Parity::Cos, g), AliasingError);
  EXPECT_THROW(basis(0, Parity::Cos, g), AliasingError);
  EXPECT_NO_THROW(basis(15, Parity::Sin, g));
}

TEST(Basis, SynthesizeInvertsCoefficients) {
  const GridSpec g = make_grid(64);
  Eigen::VectorXd c(8);
  c << 0.3, -0.1, 0.0, 2.0, 0.5, 0.25, -1.0, 0.125;
  EXPECT_LT((basis_coefficients(synthesize(g, c), 4) - c).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Basis, TableMatchesAnalyticDerivatives) {
  const GridSpec g = make_grid(64);
  const BasisTable t(g, 5);
  for (int i = 0; i < 10; ++i) {
    const ScalarField f = basis(basis_index(i).mode, basis_index(i).parity, g);
    const ScalarField d = deriv(f);
    for (int j = 0; j < g.size(); ++j) EXPECT_NEAR(t.d1(j, i), d[j], 1e-12);
  }
}

TEST(Interpolant, EvaluatesBetweenNodes) {
  const GridSpec g = make_grid(32);
  const TrigInterpolant p(cosine(g, 3) + sine(g, 1, 2.0));
  for (double x : {0.1, 1.234, 5.9}) {
    EXPECT_NEAR(p.value(x), std::cos(3 * x) + 2 * std::sin(x), 1e-13);
    EXPECT_NEAR(p.d1(x), -3 * std::sin(3 * x) + 2 * std::cos(x), 1e-12);
    EXPECT_NEAR(p.d2(x), -9 * std::cos(3 * x) - 2 * std::sin(x), 1e-11);
  }
}

TEST(Interpolant, AntiderivativeOfDensityIsCumulativeMass) {
  const GridSpec g = make_grid(32);
  const TrigInterpolant p(sample(g, [](double x) { return 1.0 + 0.5 * std::cos(x); }));
  EXPECT_NEAR(p.antiderivative(kTwoPi), 1.0, 1e-14);
  const double x = 1.1;
  EXPECT_NEAR(p.antiderivative(x), (x + 0.5 * std::sin(x)) / kTwoPi, 1e-14);
}
