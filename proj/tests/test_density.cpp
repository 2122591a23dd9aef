#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgeom/errors.hpp"

using namespace wgeom;
using wgeom::testing::bump;
using wgeom::testing::sine;

TEST(Density, NormalizesToUnitMass) {
  const GridSpec g = make_grid(32);
  const Density d = make_density(sample(g, [](double x) { return 3.0 + std::cos(x); }));
  EXPECT_NEAR(integrate(d.rho()), 1.0, 1e-15);
  EXPECT_NEAR(d.input_mass(), 3.0, 1e-14);
}

TEST(Density, RejectsNonPositiveValues) {
  const GridSpec g = make_grid(32);
  EXPECT_THROW(make_density(sample(g, [](double x) { return std::cos(x); })), DomainError);
  EXPECT_THROW(make_density(ScalarField(g)), DomainError);
}

TEST(Density, WeightedInner) {
  const GridSpec g = make_grid(32);
  const Density mu = bump(g, 0.5);
  const ScalarField c = sample(g, [](double x) { return std::cos(x); });
  // integral cos^2 (1 + cos/2) dvol = 1/2
  EXPECT_NEAR(weighted_inner(c, c, mu), 0.5, 1e-14);
  // integral cos (1 + cos/2) dvol = 1/4
  EXPECT_NEAR(weighted_inner(c, ScalarField(sample(g, [](double) { return 1.0; })), mu), 0.25, 1e-14);
}

TEST(Density, HashIsStableAndSensitive) {
  const GridSpec g = make_grid(32);
  EXPECT_EQ(density_hash(bump(g, 0.3)), density_hash(bump(g, 0.3)));
  EXPECT_NE(density_hash(bump(g, 0.3)), density_hash(bump(g, 0.30000001)));
}

TEST(Pushforward, ZeroDisplacementIsIdentity) {
  const GridSpec g = make_grid(64);
  const Density mu = bump(g, 0.4, 2);
  EXPECT_LT((pushforward_monotone(mu, ScalarField(g)).rho() - mu.rho()).max_abs(), 1e-14);
}

TEST(Pushforward, RotationTranslatesTheDensity) {
  const GridSpec g = make_grid(64);
  const Density mu = bump(g, 0.4);
  const ScalarField d = sample(g, [](double) { return 0.5; });
  const Density moved = pushforward_monotone(mu, d);
  EXPECT_LT((moved.rho() - bump(g, 0.4, 1, -0.5).rho()).max_abs(), 1e-12);
}

TEST(Pushforward, PreservesIntegralsOfTestFunctions) {
  // integral f d(T#mu) = integral f(T(x)) dmu(x)
  const GridSpec g = make_grid(256);
  const Density mu = bump(g, 0.3, 1, 0.7);
  const ScalarField d = sine(g, 1, 0.2) + sine(g, 2, 0.05);
  const Density nu = pushforward_monotone(mu, d);
  const GridSpec fine = make_grid(4096);
  const TrigInterpolant rho(mu.rho()), disp(d);
  for (int k = 1; k <= 3; ++k) {
    double lhs = integrate(sample(g, [k](double x) { return std::cos(k * x); }) * nu.rho());
    double rhs = 0.0;
    for (double x : fine.nodes()) rhs += std::cos(k * (x + disp.value(x))) * rho.value(x) / fine.size();
    EXPECT_NEAR(lhs, rhs, 1e-10) << k;
  }
}

TEST(Pushforward, MatchesParticleBinning) {
  // Weighted particles on a fine lattice are moved by T and binned into the
  // grid cells; bin averages agree with node values to second order in the
  // cell width.
  const GridSpec g = make_grid(64);
  const Density mu = bump(g, 0.5);
  const ScalarField d = sine(g, 1, 0.3);
  const Density nu = pushforward_monotone(mu, d);
  const TrigInterpolant rho(mu.rho()), disp(d);
  const int particles = 1 << 20;
  std::vector<double> bins(g.size(), 0.0);
  for (int i = 0; i < particles; ++i) {
    const double x = kTwoPi * (i + 0.5) / particles;
    double y = std::fmod(x + disp.value(x), kTwoPi);
    if (y < 0) y += kTwoPi;
    const int cell = static_cast<int>(std::floor(y / g.spacing() + 0.5)) % g.size();
    bins[cell] += rho.value(x) / particles;
  }
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) worst = std::max(worst, std::abs(bins[j] * g.size() - nu[j]));
  EXPECT_LT(worst, 5e-3);
}

TEST(Pushforward, FoldThrows) {
  const GridSpec g = make_grid(64);
  const ScalarField d = sine(g, 1, 1.5);  // 1 + 1.5 cos x changes sign
  EXPECT_LT(min_jacobian(d), 0.0);
  EXPECT_THROW(pushforward_monotone(uniform_density(g), d), FoldError);
}

TEST(Pushforward, PreimagesSolveTheMapEquation) {
  const GridSpec g = make_grid(32);
  const ScalarField d = sine(g, 1, 0.4);
  const auto x = preimages(d);
  const TrigInterpolant disp(d);
  for (int j = 0; j < g.size(); ++j) {
    const double y = x[j] + disp.value(x[j]) - g.node(j);
    EXPECT_NEAR(std::remainder(y, kTwoPi), 0.0, 1e-12);
  }
}
