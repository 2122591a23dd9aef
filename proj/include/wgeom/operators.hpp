#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "wgeom/circle_grid.hpp"
#include "wgeom/density.hpp"

namespace wgeom {

// Everything the weighted operators need at a fixed density: the basis tables
// for the first 2N trigonometric modes and the factorized Galerkin matrix
//   G_ij = integral phi_i' phi_j' dmu.
// Immutable after construction and safe to share between threads.
class WeightedOperatorContext {
 public:
  // Requires 1 <= N and 4N < n; throws ConfigError otherwise and
  // ConditioningError if the Galerkin matrix cannot be factorized.
  WeightedOperatorContext(Density mu, int truncation);

  const Density& mu() const { return mu_; }
  const GridSpec& grid() const { return mu_.grid(); }
  int truncation() const { return table_.truncation; }
  int dim() const { return basis_size(table_.truncation); }
  const BasisTable& table() const { return table_; }
  const Eigen::MatrixXd& gram() const { return gram_; }

  // Solves G x = b.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

  // Node values of rho / n, the quadrature weights of integral . dmu.
  const Eigen::VectorXd& mu_weights() const { return weights_; }

 private:
  Density mu_;
  BasisTable table_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// div_mu(xi) = rho^{-1} (rho xi)'
ScalarField div_mu(const ScalarField& xi, const WeightedOperatorContext& ctx);

// L_mu psi = -rho^{-1} (rho psi')', the positive semidefinite weighted
// Laplacian d*_mu d. With this sign div(mu grad psi) = -(L_mu psi) mu.
ScalarField laplace_mu(const ScalarField& psi, const WeightedOperatorContext& ctx);

// d*_mu omega = -rho^{-1} (rho omega)', the L2(mu) adjoint of d.
ScalarField codifferential_mu(const OneForm& omega, const WeightedOperatorContext& ctx);

struct GreenSolution {
  ScalarField potential;
  double removed_mean;
};

// Galerkin solution of L_mu phi = f in the 2N-mode span with integral phi dmu = 0.
// f must have |integral f dmu| <= 1e-8 (CompatibilityError otherwise); the
// residual mean is removed before solving and reported.
GreenSolution green_mu(const ScalarField& f, const WeightedOperatorContext& ctx);

inline constexpr double kGreenMeanTolerance = 1e-8;

struct ExactProjection {
  Eigen::VectorXd coeffs;  // potential in the basis
  ScalarField potential;   // synthesized from coeffs
  OneForm residual;        // omega - d(potential), i.e. (I - Pi_mu) omega
};

// L2(mu)-orthogonal projection of a one-form onto d(span of the first 2N modes).
ExactProjection project_exact(const OneForm& omega, const WeightedOperatorContext& ctx);

// Right-hand side integral phi_l' omega dmu of the projection normal equations.
Eigen::VectorXd exact_moments(const OneForm& omega, const WeightedOperatorContext& ctx);

}  // namespace wgeom
