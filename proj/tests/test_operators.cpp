#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/operators.hpp"
#include "wgeom/path.hpp"

using namespace wgeom;
using wgeom::testing::bump;
using wgeom::testing::cosine;
using wgeom::testing::sine;

TEST(Operators, ContextValidatesTruncation) {
  const GridSpec g = make_grid(64);
  EXPECT_THROW(WeightedOperatorContext(uniform_density(g), 0), ConfigError);
  EXPECT_THROW(WeightedOperatorContext(uniform_density(g), 16), ConfigError);
  EXPECT_NO_THROW(WeightedOperatorContext(uniform_density(g), 15));
}

TEST(Operators, LaplacianAtVolHasEigenvaluesKSquared) {
  const GridSpec g = make_grid(64);
  const WeightedOperatorContext ctx(uniform_density(g), 4);
  for (int k = 1; k <= 6; ++k) EXPECT_LT((laplace_mu(cosine(g, k), ctx) - cosine(g, k, k * k)).max_abs(), 1e-10);
}

TEST(Operators, LaplacianIsSymmetricInWeightedL2) {
  const GridSpec g = make_grid(128);
  const WeightedOperatorContext ctx(bump(g, 0.6, 1, 0.4), 6);
  const ScalarField f = cosine(g, 2) + sine(g, 3, 0.5);
  const ScalarField h = sine(g, 1) - cosine(g, 4, 0.3);
  const double a = weighted_inner(f, laplace_mu(h, ctx), ctx.mu());
  const double b = weighted_inner(laplace_mu(f, ctx), h, ctx.mu());
  const double dirichlet = weighted_inner(deriv(f), deriv(h), ctx.mu());
  EXPECT_NEAR(a, b, 1e-12);
  EXPECT_NEAR(a, dirichlet, 1e-12);
}

TEST(Operators, DivergenceFormulas) {
  const GridSpec g = make_grid(128);
  const WeightedOperatorContext ctx(bump(g, 0.5, 2), 4);
  const ScalarField psi = sine(g, 1) + cosine(g, 3, 0.2);
  // L_mu psi = -div_mu(psi')
  EXPECT_LT((laplace_mu(psi, ctx) + div_mu(deriv(psi), ctx)).max_abs(), 1e-11);
  // d*_mu is the weighted adjoint of d
  const OneForm w = flat(cosine(g, 2) + sine(g, 5, 0.1));
  EXPECT_NEAR(weighted_inner(w, flat(deriv(psi)), ctx.mu()),
              weighted_inner(codifferential_mu(w, ctx), psi, ctx.mu()), 1e-12);
}

TEST(Operators, GreenInvertsTheLaplacianOnTheSpan) {
  const GridSpec g = make_grid(128);
  const WeightedOperatorContext ctx(bump(g, 0.4, 1, 1.0), 8);
  const ScalarField psi = demean(sine(g, 2) + cosine(g, 1, 0.7), ctx.mu());
  const GreenSolution s = green_mu(laplace_mu(psi, ctx), ctx);
  // the span is not L_mu-invariant at a non-uniform density; the Galerkin
  // answer differs from psi only by the truncation error
  EXPECT_LT((s.potential - psi).max_abs(), 1e-6);
  EXPECT_NEAR(weighted_inner(s.potential, ScalarField(sample(g, [](double) { return 1.0; })), ctx.mu()), 0.0, 1e-12);
}

TEST(Operators, GreenIsExactAtVol) {
  const GridSpec g = make_grid(64);
  const WeightedOperatorContext ctx(uniform_density(g), 6);
  const ScalarField psi = sine(g, 2) + cosine(g, 5, 0.7);
  EXPECT_LT((green_mu(laplace_mu(psi, ctx), ctx).potential - psi).max_abs(), 1e-12);
}

TEST(Operators, GreenRejectsIncompatibleData) {
  const GridSpec g = make_grid(64);
  const WeightedOperatorContext ctx(uniform_density(g), 4);
  EXPECT_THROW(green_mu(sample(g, [](double x) { return 1.0 + std::cos(x); }), ctx), CompatibilityError);
}

TEST(Operators, ProjectionLeavesExactFormsAlone) {
  const GridSpec g = make_grid(128);
  const WeightedOperatorContext ctx(bump(g, 0.5), 6);
  const ScalarField psi = sine(g, 3) + cosine(g, 2, 0.2);
  const ExactProjection p = project_exact(flat(deriv(psi)), ctx);
  EXPECT_LT(p.residual.max_abs(), 1e-12);
  EXPECT_LT((p.coeffs - basis_coefficients(psi, 6)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Operators, ProjectionResidualIsOrthogonal) {
  const GridSpec g = make_grid(128);
  const WeightedOperatorContext ctx(bump(g, 0.5, 1, 0.3), 6);
  const OneForm w = flat(sample(g, [](double x) { return std::exp(std::sin(x)) + std::cos(3 * x); }));
  const ExactProjection p = project_exact(w, ctx);
  EXPECT_LT(exact_moments(p.residual, ctx).cwiseAbs().maxCoeff(), 1e-12);
  // idempotent
  EXPECT_LT(project_exact(flat(deriv(p.potential)), ctx).residual.max_abs(), 1e-12);
}
