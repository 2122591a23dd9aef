#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wgeom/density.hpp"
#include "wgeom/path.hpp"

namespace wgeom {

// count equally spaced times on [0, 1].
std::vector<double> uniform_times(int count);

// First t > 0 with 1 + t * psi0'' <= 0 somewhere (4x refined sample), or +inf.
double caustic_time(const ScalarField& psi0);

// Solution of  d psi/dt + |psi'|^2 / 2 = 0  at time t by characteristics:
// psi_t(x + t psi0'(x)) = psi0(x) + t psi0'(x)^2 / 2.  Not de-meaned.
ScalarField hj_potential(const ScalarField& psi0, double t);

struct GeodesicOptions {
  int steps_per_unit_time = 200;
};

// Hamilton-Jacobi route: potentials by characteristics, densities by RK4
// integration of the continuity equation rho' = -(rho psi_t')' on the grid.
// Throws CausticError when characteristics cross before the last time.
GeodesicPath geodesic_hj(const Density& mu0, const ScalarField& psi0, std::span<const double> times,
                         const GeodesicOptions& options = {});

// Christoffel route: RK4 on the frame equations
//   psi_k' = -sum_ij Gamma^k_ij(mu_t) psi_i psi_j,   rho' = -(rho psi')'
// with Gamma rebuilt at every stage. The truncation is psi0_coeffs.size() / 2.
GeodesicPath geodesic_christoffel(const Density& mu0, const Eigen::VectorXd& psi0_coeffs,
                                  std::span<const double> times, const GeodesicOptions& options = {});

// mu_t = (x -> x + t psi'(x))_* mu0. Throws FoldError when 1 + t psi'' <= 0.
Density displacement_interpolation(const Density& mu0, const ScalarField& psi, double t);

// Displacement interpolation sampled at times, with characteristic potentials.
GeodesicPath displacement_path(const Density& mu0, const ScalarField& psi, std::span<const double> times);

// Constant velocity field curve mu_t = (flow_t of grad psi)_* mu0 sampled at
// times; the potential is psi at every sample.
GeodesicPath flow_path(const Density& mu0, const ScalarField& psi, std::span<const double> times);

// integral psi_t'^2 dmu_t at every sample.
std::vector<double> action_integrand(const GeodesicPath& path);

// Time quadrature of the action integrand: composite Simpson on uniform grids
// with an odd sample count, trapezoid otherwise.
double action(const GeodesicPath& path);

// Largest L2(vol) norm over interior samples of rho_t' + (rho_t psi_t')',
// with rho_t' from a fourth-order central difference. Needs a uniform time
// grid with at least five samples.
double continuity_residual(const GeodesicPath& path);

// Largest sup-norm density difference between two paths sampled at the same times.
double max_density_gap(const GeodesicPath& a, const GeodesicPath& b);

using DistanceOracle = std::function<double(const Density&, const Density&)>;

struct SpeedSample {
  double s;
  double t;
  double ratio;  // W2(mu_s, mu_t) / |t - s|
};

struct ConstantSpeedReport {
  double reference;  // W2(mu_first, mu_last) / |t_last - t_first|
  std::vector<SpeedSample> samples;
  double max_abs_deviation;
  double max_rel_deviation;  // max |ratio / reference - 1|, 0 when reference is 0
};

ConstantSpeedReport constant_speed_report(const GeodesicPath& path, const DistanceOracle& oracle);

}  // namespace wgeom
