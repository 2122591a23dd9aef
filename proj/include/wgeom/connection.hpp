#pragma once

#include <vector>

#include <Eigen/Dense>

#include "wgeom/operators.hpp"
#include "wgeom/path.hpp"
#include "wgeom/tangent.hpp"

namespace wgeom {

// Which operator plays the role of the Laplacian in the divergence form of
// the bracket: Positive is L_mu = d*_mu d, Negative is div_mu grad = -L_mu.
enum class LaplacianSign { Positive, Negative };

// [V_phi1, V_phi2] = V_theta with d theta = Pi_mu(phi2'' phi1' - phi1'' phi2'),
// obtained as theta = G_mu d*_mu of that one-form (one projection).
TangentVector lie_bracket(const ScalarField& phi1, const ScalarField& phi2,
                          const WeightedOperatorContext& ctx);

// The same bracket through the divergence form
//   theta = D^{-1} d*_mu (phi2' D phi1 - phi1' D phi2),  D = +-L_mu,
// which goes through two weighted Laplacians, a codifferential and a Green
// solve. The result does not depend on the sign chosen for D.
TangentVector lie_bracket_divergence_form(const ScalarField& phi1, const ScalarField& phi2,
                                          const WeightedOperatorContext& ctx,
                                          LaplacianSign sign = LaplacianSign::Positive);

// Levi-Civita derivative of the constant field V_phi2 along V_phi1:
// the potential of Pi_mu(phi1' phi2'') re-projected to the truncated span.
TangentVector covariant_derivative(const ScalarField& phi1, const ScalarField& phi2,
                                   const WeightedOperatorContext& ctx);

// Gamma^k_ij in the trigonometric frame:  nabla_{V_i} V_j = sum_k Gamma^k_ij V_k.
class ChristoffelTensor {
 public:
  ChristoffelTensor(Density base, int truncation, Eigen::MatrixXd gamma, double solve_residual);

  const Density& base() const { return base_; }
  int truncation() const { return truncation_; }
  int dim() const { return basis_size(truncation_); }
  double operator()(int k, int i, int j) const { return gamma_(k, i * dim() + j); }

  // v_k = sum_ij Gamma^k_ij a_i b_j
  Eigen::VectorXd contract(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  // A_kj = sum_i Gamma^k_ij a_i, so that contract(a, b) = A b.
  Eigen::MatrixXd contract_first(const Eigen::VectorXd& a) const;

  // Largest |G Gamma_ij - C_ij| over all (i, j).
  double solve_residual() const { return solve_residual_; }
  // Largest |Gamma^k_ij - Gamma^k_ji|; nonzero in general since the frame
  // fields do not commute.
  double lower_index_asymmetry() const;

  // Row k, column i*dim+j.
  const Eigen::MatrixXd& raw() const { return gamma_; }

 private:
  Density base_;
  int truncation_;
  Eigen::MatrixXd gamma_;
  double solve_residual_;
};

// Moments C_ijl = integral phi_i' phi_j'' phi_l' dmu, laid out row l, column i*dim+j.
Eigen::MatrixXd connection_moments(const WeightedOperatorContext& ctx);

ChristoffelTensor christoffel(const WeightedOperatorContext& ctx);

// Parallel transport of eta0 along a sampled path by RK4 on the frame
// equation  eta_k' = -sum_ij Gamma^k_ij(mu_t) psi_i(t) eta_j.
// Christoffel symbols are rebuilt at every sample; values between samples are
// cubic Lagrange interpolants in time. Needs at least four samples.
// Returns eta at every sample time.
std::vector<TangentVector> parallel_transport(const TangentVector& eta0, const GeodesicPath& path);

}  // namespace wgeom
