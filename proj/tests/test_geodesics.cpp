#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/geodesics.hpp"
#include "wgeom/ot_oracle.hpp"

using namespace wgeom;
using wgeom::testing::bump;
using wgeom::testing::cosine;
using wgeom::testing::sine;

namespace {

const GridSpec& grid() {
  static const GridSpec g = make_grid(128);
  return g;
}

const GeodesicPath& hj_path() {
  static const GeodesicPath p = geodesic_hj(uniform_density(grid()), cosine(grid(), 1, 0.1), uniform_times(21));
  return p;
}

}  // namespace

TEST(Geodesic, UniformTimes) {
  const auto t = uniform_times(5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_DOUBLE_EQ(t[1], 0.25);
  EXPECT_DOUBLE_EQ(t.back(), 1.0);
}

TEST(Geodesic, CausticTime) {
  EXPECT_NEAR(caustic_time(cosine(grid(), 1, 2.0)), 0.5, 1e-12);
  EXPECT_TRUE(std::isinf(caustic_time(cosine(grid(), 1, 0.1)) ) || caustic_time(cosine(grid(), 1, 0.1)) > 9.9);
}

TEST(Geodesic, CausticThrowsWithCrossingTime) {
  try {
    geodesic_hj(uniform_density(grid()), cosine(grid(), 1, 2.0), uniform_times(11));
    FAIL() << "expected CausticError";
  } catch (const CausticError& e) {
    EXPECT_NEAR(e.crossing_time(), 0.5, 1e-9);
  }
}

TEST(Geodesic, DisplacementFoldThrows) {
  EXPECT_THROW(displacement_interpolation(uniform_density(grid()), cosine(grid(), 1, 2.0), 1.0), FoldError);
}

TEST(Geodesic, HamiltonJacobiByCharacteristics) {
  const ScalarField psi0 = sine(grid(), 1, 0.2);
  const double t = 0.6;
  const ScalarField psi = hj_potential(psi0, t);
  // psi_t(x + t psi0'(x)) = psi0(x) + t psi0'(x)^2 / 2 at a few feet
  const TrigInterpolant p(psi);
  for (double x : {0.3, 2.0, 4.4}) {
    const double v = 0.2 * std::cos(x);
    EXPECT_NEAR(p.value(x + t * v), 0.2 * std::sin(x) + t * v * v / 2, 1e-9);
  }
}

TEST(Geodesic, RoutesAgree) {
  const Density mu0 = bump(grid(), 0.3, 1, 0.4);
  const ScalarField psi0 = cosine(grid(), 1, 0.1) + sine(grid(), 2, 0.02);
  const auto times = uniform_times(11);
  const GeodesicPath hj = geodesic_hj(mu0, psi0, times);
  const GeodesicPath ch = geodesic_christoffel(mu0, basis_coefficients(psi0, 12), times);
  const GeodesicPath dp = displacement_path(mu0, psi0, times);
  EXPECT_LT(max_density_gap(hj, dp), 1e-6);
  EXPECT_LT(max_density_gap(hj, ch), 1e-4);
  EXPECT_LT(continuity_residual(hj), 1e-6);
}

TEST(Geodesic, ActionEqualsSquaredDistance) {
  const GeodesicPath& p = hj_path();
  const double w2 = w2_circle_exact(p.densities.front(), p.densities.back()).w2;
  EXPECT_NEAR(w2, 0.1 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(action(p), 0.005, 1e-8);
  for (double v : action_integrand(p)) EXPECT_NEAR(v, 0.005, 1e-8);
}

TEST(Geodesic, ConstantSpeed) {
  const ConstantSpeedReport r =
      constant_speed_report(hj_path(), [](const Density& a, const Density& b) { return w2_circle_exact(a, b).w2; });
  EXPECT_NEAR(r.reference, 0.1 / std::sqrt(2.0), 1e-9);
  EXPECT_LT(r.max_rel_deviation, 1e-6);
}

TEST(Geodesic, FlowOfAConstantFieldIsSlower) {
  // speed^2 of the flow path decays like eps^2/2 (1 - eps^2 t^2 / 4)
  const GeodesicPath f = flow_path(uniform_density(grid()), cosine(grid(), 1, 0.1), uniform_times(11));
  const auto speed = action_integrand(f);
  EXPECT_NEAR(speed.front(), 0.005, 1e-12);
  EXPECT_LT(speed.back(), speed.front());
  EXPECT_NEAR(speed.back() / speed.front(), 1.0 - 0.01 / 4, 2e-4);
}

TEST(Geodesic, PotentialsAreDemeaned) {
  const GeodesicPath& p = hj_path();
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(integrate(p.potentials[i] * p.densities[i].rho()), 0.0, 1e-14);
}

TEST(Geodesic, ValidateRejectsBadPaths) {
  GeodesicPath p = hj_path();
  p.times[3] = p.times[2];
  EXPECT_THROW(p.validate(), DomainError);
  p = hj_path();
  p.potentials.pop_back();
  EXPECT_THROW(p.validate(), DomainError);
}
