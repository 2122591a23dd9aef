#include "wgeom/connection.hpp"

#include <array>

#include "wgeom/errors.hpp"

namespace wgeom {

namespace {

TangentVector from_projection(const OneForm& omega, const WeightedOperatorContext& ctx) {
  return TangentVector(ctx.mu(), project_exact(omega, ctx).coeffs);
}

// Lagrange weights of the samples ts at the point t.
std::array<double, 4> lagrange4(const std::array<double, 4>& ts, double t) {
  std::array<double, 4> w{};
  for (int a = 0; a < 4; ++a) {
    double p = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) p *= (t - ts[b]) / (ts[a] - ts[b]);
    w[a] = p;
  }
  return w;
}

}  // namespace

TangentVector lie_bracket(const ScalarField& phi1, const ScalarField& phi2,
                          const WeightedOperatorContext& ctx) {
  const ScalarField d1a = deriv(phi1, 1), d2a = deriv(phi1, 2);
  const ScalarField d1b = deriv(phi2, 1), d2b = deriv(phi2, 2);
  return from_projection(flat(d2b * d1a - d2a * d1b), ctx);
}

TangentVector lie_bracket_divergence_form(const ScalarField& phi1, const ScalarField& phi2,
                                          const WeightedOperatorContext& ctx, LaplacianSign sign) {
  const double s = sign == LaplacianSign::Positive ? 1.0 : -1.0;
  const ScalarField lap1 = s * laplace_mu(phi1, ctx);
  const ScalarField lap2 = s * laplace_mu(phi2, ctx);
  const OneForm field = flat(deriv(phi2, 1) * lap1 - deriv(phi1, 1) * lap2);
  // D^{-1} = s * G_mu
  const GreenSolution g = green_mu(codifferential_mu(field, ctx), ctx);
  return TangentVector(ctx.mu(), s * basis_coefficients(g.potential, ctx.truncation()));
}

TangentVector covariant_derivative(const ScalarField& phi1, const ScalarField& phi2,
                                   const WeightedOperatorContext& ctx) {
  return from_projection(flat(deriv(phi1, 1) * deriv(phi2, 2)), ctx);
}

// ---------------------------------------------------------------------------

ChristoffelTensor::ChristoffelTensor(Density base, int truncation, Eigen::MatrixXd gamma,
                                     double solve_residual)
    : base_(std::move(base)), truncation_(truncation), gamma_(std::move(gamma)),
      solve_residual_(solve_residual) {
  const int m = basis_size(truncation_);
  if (gamma_.rows() != m || gamma_.cols() != m * m)
    throw ShapeError("Christoffel storage does not match truncation");
}

Eigen::VectorXd ChristoffelTensor::contract(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return contract_first(a) * b;
}

Eigen::MatrixXd ChristoffelTensor::contract_first(const Eigen::VectorXd& a) const {
  const int m = dim();
  if (a.size() != m) throw ShapeError("contraction vector has wrong length");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    if (a[i] == 0.0) continue;
    out.noalias() += a[i] * gamma_.middleCols(i * m, m);
  }
  return out;
}

double ChristoffelTensor::lower_index_asymmetry() const {
  const int m = dim();
  double worst = 0.0;
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) worst = std::max(worst, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return worst;
}

Eigen::MatrixXd connection_moments(const WeightedOperatorContext& ctx) {
  const BasisTable& t = ctx.table();
  const int m = ctx.dim();
  Eigen::MatrixXd moments(m, m * m);
  for (int l = 0; l < m; ++l) {
    const Eigen::VectorXd w = ctx.mu_weights().cwiseProduct(t.d1.col(l));
    const Eigen::MatrixXd block = t.d1.transpose() * w.asDiagonal() * t.d2;  // (i, j)
    for (int i = 0; i < m; ++i) moments.block(l, i * m, 1, m) = block.row(i);
  }
  return moments;
}

ChristoffelTensor christoffel(const WeightedOperatorContext& ctx) {
  const Eigen::MatrixXd moments = connection_moments(ctx);
  Eigen::MatrixXd gamma = ctx.solve(moments);
  const double residual = (ctx.gram() * gamma - moments).cwiseAbs().maxCoeff();
  return ChristoffelTensor(ctx.mu(), ctx.truncation(), std::move(gamma), residual);
}

// ---------------------------------------------------------------------------

std::vector<TangentVector> parallel_transport(const TangentVector& eta0, const GeodesicPath& path) {
  path.validate();
  const std::size_t count = path.size();
  if (count < 4) throw DomainError("parallel transport needs at least four path samples");
  if (!(eta0.base() == path.densities.front()))
    throw DomainError("initial vector does not live at the first density of the path");
  const int trunc = eta0.truncation();

  // A(t)_kj = sum_i Gamma^k_ij(mu_t) psi_i(t) at every sample.
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const WeightedOperatorContext ctx(path.densities[s], trunc);
    const Eigen::VectorXd psi = basis_coefficients(path.potentials[s], trunc);
    ops.push_back(christoffel(ctx).contract_first(psi));
  }

  auto op_at = [&](std::size_t s, double t) {
    std::size_t first = s == 0 ? 0 : s - 1;
    first = std::min(first, count - 4);
    std::array<double, 4> ts{};
    for (int a = 0; a < 4; ++a) ts[a] = path.times[first + a];
    const auto w = lagrange4(ts, t);
    Eigen::MatrixXd a = w[0] * ops[first];
    for (int b = 1; b < 4; ++b) a += w[b] * ops[first + b];
    return a;
  };

  std::vector<TangentVector> out;
  out.reserve(count);
  Eigen::VectorXd eta = eta0.coeffs();
  out.push_back(eta0);
  for (std::size_t s = 0; s + 1 < count; ++s) {
    const double h = path.times[s + 1] - path.times[s];
    const Eigen::MatrixXd mid = op_at(s, path.times[s] + 0.5 * h);
    const Eigen::VectorXd k1 = -ops[s] * eta;
    const Eigen::VectorXd k2 = -mid * (eta + 0.5 * h * k1);
    const Eigen::VectorXd k3 = -mid * (eta + 0.5 * h * k2);
    const Eigen::VectorXd k4 = -ops[s + 1] * (eta + h * k3);
    eta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.emplace_back(path.densities[s + 1], eta);
  }
  return out;
}

}  // namespace wgeom
