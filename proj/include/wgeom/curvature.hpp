#pragma once

#include "wgeom/operators.hpp"

namespace wgeom {

// T_{phi psi} = (I - Pi_mu)(phi' psi'' dx), the part of the one-form that is
// not exact in L2(mu).
struct TTensor {
  OneForm residual;
  Density base;
  double norm2;  // integral residual^2 dmu
};

// Exact when the context truncation is at least twice the highest mode of
// phi' psi'' / 2; in particular T_{phi psi} + T_{psi phi} vanishes to roundoff
// once phi' psi' lies in the span.
TTensor t_tensor(const ScalarField& phi, const ScalarField& psi, const WeightedOperatorContext& ctx);

// integral <T1, T2> dmu
double t_pairing(const TTensor& a, const TTensor& b);

// Curvature of the base manifold integrated against the four gradients. The
// circle is flat, so this is zero; other base manifolds plug in here.
double base_curvature_term(const ScalarField& phi1, const ScalarField& phi2, const ScalarField& phi3,
                           const ScalarField& phi4, const Density& mu);

// <R(V1, V2) V3, V4> with R(X, Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]:
//   base term - 2 <T12, T34> + <T23, T14> - <T13, T24>.
// With this orientation K(V1, V2) = <R(V1, V2) V2, V1> / |V1 ^ V2|^2.
double riemann(const ScalarField& phi1, const ScalarField& phi2, const ScalarField& phi3,
               const ScalarField& phi4, const WeightedOperatorContext& ctx);

// 3 |T12|^2 / (|V1|^2 |V2|^2 - <V1, V2>^2) plus the base contribution.
// Throws DomainError when V1 and V2 are (numerically) dependent.
double sectional(const ScalarField& phi1, const ScalarField& phi2, const WeightedOperatorContext& ctx);

struct FdCurvature {
  double finite_difference;  // <R(e_k, e_l) e_j, e_m> from Christoffel symbols
  double theorem;            // riemann(phi_k, phi_l, phi_j, phi_m)
  double abs_error;
  double rel_error;          // abs_error / |theorem|, or abs_error when theorem == 0
  bool cancellation_warning; // h below 1e-4
};

// Independent curvature evaluation in the trigonometric frame:
//   R^m_jkl = e_k(Gamma^m_lj) - e_l(Gamma^m_kj)
//             + Gamma^m_kp Gamma^p_lj - Gamma^m_lp Gamma^p_kj - c^p_kl Gamma^m_pj
// with c^p_kl = Gamma^p_kl - Gamma^p_lk and e_k(.) a central difference along
// rho +- h delta rho, delta rho = -(rho phi_k')'. The result is lowered with
// the Gram matrix and compared with riemann. Indices are basis positions.
// Throws DomainError unless 0 < h <= 1e-2.
FdCurvature riemann_fd_oracle(int k, int l, int j, int m, const Density& mu, int truncation, double h);

}  // namespace wgeom
