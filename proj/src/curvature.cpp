#include "wgeom/curvature.hpp"

#include <cmath>

#include "wgeom/connection.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/tangent.hpp"

namespace wgeom {

TTensor t_tensor(const ScalarField& phi, const ScalarField& psi, const WeightedOperatorContext& ctx) {
  const OneForm omega = flat(deriv(phi, 1) * deriv(psi, 2));
  OneForm residual = project_exact(omega, ctx).residual;
  const double n2 = weighted_inner(residual, residual, ctx.mu());
  return {std::move(residual), ctx.mu(), n2};
}

double t_pairing(const TTensor& a, const TTensor& b) {
  if (!(a.base == b.base)) throw DomainError("T-tensors live at different densities");
  return weighted_inner(a.residual, b.residual, a.base);
}

double base_curvature_term(const ScalarField&, const ScalarField&, const ScalarField&, const ScalarField&,
                           const Density&) {
  // Extension point: integral <R_M(grad phi1, grad phi2) grad phi3, grad phi4> dmu.
  return 0.0;
}

double riemann(const ScalarField& phi1, const ScalarField& phi2, const ScalarField& phi3,
               const ScalarField& phi4, const WeightedOperatorContext& ctx) {
  const double base = base_curvature_term(phi1, phi2, phi3, phi4, ctx.mu());
  const double t1234 = t_pairing(t_tensor(phi1, phi2, ctx), t_tensor(phi3, phi4, ctx));
  const double t2314 = t_pairing(t_tensor(phi2, phi3, ctx), t_tensor(phi1, phi4, ctx));
  const double t1324 = t_pairing(t_tensor(phi1, phi3, ctx), t_tensor(phi2, phi4, ctx));
  return base - 2.0 * t1234 + t2314 - t1324;
}

double sectional(const ScalarField& phi1, const ScalarField& phi2, const WeightedOperatorContext& ctx) {
  const Density& mu = ctx.mu();
  const double a = observable_derivative(phi1, phi1, mu);
  const double b = observable_derivative(phi2, phi2, mu);
  const double c = observable_derivative(phi1, phi2, mu);
  const double det = a * b - c * c;
  if (!(det > 1e-12 * a * b) || !(a > 0.0) || !(b > 0.0))
    throw DomainError("sectional curvature of a degenerate plane");
  const double base = base_curvature_term(phi1, phi2, phi2, phi1, mu);
  return (base + 3.0 * t_tensor(phi1, phi2, ctx).norm2) / det;
}

namespace {

ChristoffelTensor christoffel_at(const ScalarField& rho, int truncation) {
  return christoffel(WeightedOperatorContext(make_density(rho), truncation));
}

}  // namespace

FdCurvature riemann_fd_oracle(int k, int l, int j, int m, const Density& mu, int truncation, double h) {
  if (!(h > 0.0) || h > 1e-2) throw DomainError("finite-difference step must lie in (0, 1e-2]");
  const WeightedOperatorContext ctx(mu, truncation);
  const int dim = ctx.dim();
  for (int idx : {k, l, j, m})
    if (idx < 0 || idx >= dim) throw DomainError("basis index " + std::to_string(idx) + " outside the frame");

  const ChristoffelTensor g0 = christoffel(ctx);
  auto column = [&](int a) {
    const Eigen::VectorXd c = ctx.table().phi.col(a);
    return ScalarField(ctx.grid(), std::vector<double>(c.data(), c.data() + c.size()));
  };

  // Derivative of every Gamma^p_ab along e_a: central difference in the density.
  auto frame_derivative = [&](int a) {
    const ScalarField drho = -deriv(mu.rho() * deriv(column(a), 1), 1);
    const ChristoffelTensor plus = christoffel_at(mu.rho() + h * drho, truncation);
    const ChristoffelTensor minus = christoffel_at(mu.rho() - h * drho, truncation);
    return Eigen::MatrixXd((plus.raw() - minus.raw()) / (2.0 * h));
  };
  const Eigen::MatrixXd dk = frame_derivative(k);
  const Eigen::MatrixXd dl = frame_derivative(l);

  Eigen::VectorXd r(dim);  // R^p_jkl for every p
  for (int p = 0; p < dim; ++p) {
    double s = dk(p, l * dim + j) - dl(p, k * dim + j);
    for (int q = 0; q < dim; ++q) {
      s += g0(p, k, q) * g0(q, l, j) - g0(p, l, q) * g0(q, k, j);
      s -= (g0(q, k, l) - g0(q, l, k)) * g0(p, q, j);
    }
    r[p] = s;
  }
  FdCurvature out;
  out.finite_difference = ctx.gram().row(m).dot(r);

  int top = 0;
  for (int idx : {k, l, j, m}) top = std::max(top, basis_index(idx).mode);
  const WeightedOperatorContext tctx(mu, std::max(truncation, 2 * top));
  out.theorem = riemann(column(k), column(l), column(j), column(m), tctx);
  out.abs_error = std::abs(out.finite_difference - out.theorem);
  out.rel_error = std::abs(out.theorem) > 1e-10 ? out.abs_error / std::abs(out.theorem) : out.abs_error;
  out.cancellation_warning = h < 1e-4;
  return out;
}

}  // namespace wgeom
