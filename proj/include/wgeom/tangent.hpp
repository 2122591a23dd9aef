#pragma once

#include <vector>

#include <Eigen/Dense>

#include "wgeom/circle_grid.hpp"
#include "wgeom/density.hpp"

namespace wgeom {

// V_psi at a base density, stored as the coefficients of the potential psi in
// the first 2N basis functions. Constants are excluded: V_const = 0.
class TangentVector {
 public:
  TangentVector(Density base, Eigen::VectorXd coeffs);
  static TangentVector zero(Density base, int truncation);

  const Density& base() const { return base_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int truncation() const { return static_cast<int>(coeffs_.size() / 2); }
  ScalarField potential() const;

  TangentVector& operator+=(const TangentVector& other);
  TangentVector& operator*=(double s);
  friend TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
  friend TangentVector operator*(double s, TangentVector a) { return a *= s; }

 private:
  Density base_;
  Eigen::VectorXd coeffs_;
};

// Otto metric in the trigonometric frame, g_ij = integral phi_i' phi_j' dmu.
struct GramMatrix {
  Eigen::MatrixXd entries;
  Density base;
  double condition;  // ratio of extreme eigenvalues

  static constexpr double kConditionWarning = 1e12;
  bool ill_conditioned() const { return condition > kConditionWarning; }
};

// Requires 4N < n.
GramMatrix metric_gram(const Density& mu, int truncation);

// Throws DomainError when the vectors live at different densities or truncations.
double otto_inner(const TangentVector& v, const TangentVector& w);

// F_phi(mu) = integral phi dmu
double observable(const ScalarField& phi, const Density& mu);

// (V_psi F_phi)(mu) = integral phi' psi' dmu
double observable_derivative(const TangentVector& v, const ScalarField& phi);
double observable_derivative(const ScalarField& psi, const ScalarField& phi, const Density& mu);

struct FlowOptions {
  int steps_per_unit_time = 64;
  // Node trajectories are recomputed with doubled step counts until two
  // successive results agree to this tolerance.
  double tolerance = 1e-11;
  int max_steps_per_unit_time = 1 << 16;
};

// mu_t = (T_t)_* mu0 with T_t the time-t flow of grad psi: node trajectories
// x' = psi'(x) are integrated with classical RK4 and mu0 is pushed forward by
// the resulting diffeomorphism. Throws StiffnessError when the step control
// exhausts max_steps_per_unit_time.
Density flow_constant_field(const ScalarField& psi, const Density& mu0, double t,
                            const FlowOptions& options = {});

// Squared metric speed of the constant-field flow at mu: integral psi'^2 dmu.
double flow_speed_squared(const ScalarField& psi, const Density& mu);

// Image of V_psi under grad psi -> rho grad psi, re-expressed as a gradient
// at the uniform density by Galerkin projection.
TangentVector remap_to_vol(const TangentVector& v);

}  // namespace wgeom
