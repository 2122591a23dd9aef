#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/tangent.hpp"
#include "wgeom/validation.hpp"

using namespace wgeom;
using wgeom::testing::bump;
using wgeom::testing::cosine;
using wgeom::testing::sine;

TEST(Gram, DiagonalAtVol) {
  const GramMatrix g = metric_gram(uniform_density(make_grid(256)), 8);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double expected = i == j ? std::pow(basis_index(i).mode, 2) : 0.0;
      EXPECT_NEAR(g.entries(i, j), expected, 1e-12);
    }
  EXPECT_NEAR(g.condition, 64.0, 1e-9);
  EXPECT_FALSE(g.ill_conditioned());
}

TEST(Gram, SymmetricPositiveDefiniteAtRandomDensities) {
  const GridSpec grid = make_grid(128);
  SplitMix rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GramMatrix g = metric_gram(random_smooth_density(grid, rng, 3, 0.5), 6);
    EXPECT_LT((g.entries - g.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.entries).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Gram, RejectsAliasedTruncation) {
  EXPECT_THROW(metric_gram(uniform_density(make_grid(32)), 8), ConfigError);
}

TEST(Tangent, InnerProductMatchesGram) {
  const GridSpec g = make_grid(128);
  const Density mu = bump(g, 0.5, 2);
  Eigen::VectorXd a(8), b(8);
  a << 1, 0, 0.5, 0, 0, -1, 0.2, 0;
  b << 0, 1, 0, 0.3, 0, 0, 0, 2;
  const TangentVector v(mu, a), w(mu, b);
  EXPECT_NEAR(otto_inner(v, w), a.dot(metric_gram(mu, 4).entries * b), 1e-13);
  EXPECT_NEAR(otto_inner(v, w), weighted_inner(deriv(v.potential()), deriv(w.potential()), mu), 1e-13);
}

TEST(Tangent, InnerProductRejectsMismatchedBases) {
  const GridSpec g = make_grid(64);
  const TangentVector v(uniform_density(g), Eigen::VectorXd::Ones(4));
  EXPECT_THROW(otto_inner(v, TangentVector(bump(g, 0.1), Eigen::VectorXd::Ones(4))), DomainError);
  EXPECT_THROW(otto_inner(v, TangentVector(uniform_density(g), Eigen::VectorXd::Ones(6))), DomainError);
}

TEST(Tangent, ObservableDerivativeMatchesFlow) {
  const GridSpec g = make_grid(128);
  const Density mu = bump(g, 0.4, 1, 0.2);
  const ScalarField psi = sine(g, 1, 0.5) + cosine(g, 2, 0.2);
  const ScalarField phi = cosine(g, 1) + sine(g, 3, 0.3);
  const double h = 1e-4;
  const double fd = (observable(phi, flow_constant_field(psi, mu, h)) - observable(phi, flow_constant_field(psi, mu, -h))) /
                    (2 * h);
  EXPECT_NEAR(fd, observable_derivative(psi, phi, mu), 1e-8);
}

TEST(Tangent, FlowBackwardInvertsForward) {
  const GridSpec g = make_grid(128);
  const Density mu = bump(g, 0.3);
  const ScalarField psi = sine(g, 1, 0.4);
  const Density there = flow_constant_field(psi, mu, 0.7);
  const Density back = flow_constant_field(psi, there, -0.7);
  EXPECT_LT((back.rho() - mu.rho()).max_abs(), 1e-9);
}

TEST(Tangent, FlowSpeed) {
  const GridSpec g = make_grid(64);
  EXPECT_NEAR(flow_speed_squared(cosine(g, 2, 0.1), uniform_density(g)), 0.02, 1e-15);
}

TEST(Tangent, RemapToVolPreservesTheMomentum) {
  // phi' equals rho psi' up to its (non-exact) mean
  const GridSpec g = make_grid(128);
  const Density mu = bump(g, 0.3);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(16);
  c[1] = 1.0;
  const TangentVector v(mu, c);
  const TangentVector r = remap_to_vol(v);
  EXPECT_EQ(r.base(), uniform_density(g));
  const ScalarField gap = deriv(r.potential()) - mu.rho() * deriv(v.potential());
  EXPECT_LT((gap - sample(g, [&](double) { return integrate(gap); })).max_abs(), 1e-10);
}

TEST(Tangent, RemapToVolNormBound) {
  // |F(V)|^2_vol <= max(rho) |V|^2_mu
  const GridSpec grid = make_grid(128);
  SplitMix rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Density mu = random_smooth_density(grid, rng, 2, 0.5);
    const TangentVector v(mu, random_coeffs(rng, 6, 3, 1.0));
    const TangentVector r = remap_to_vol(v);
    EXPECT_LE(otto_inner(r, r), mu.max() * otto_inner(v, v) * (1 + 1e-12));
  }
}
