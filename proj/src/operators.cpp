#include "wgeom/operators.hpp"

#include "wgeom/errors.hpp"

namespace wgeom {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_grid(const GridSpec& g, const WeightedOperatorContext& ctx) {
  if (!(g == ctx.grid())) throw ShapeError("field and operator context live on different grids");
}

}  // namespace

WeightedOperatorContext::WeightedOperatorContext(Density mu, int truncation)
    : mu_(std::move(mu)),
      table_([&] {
        if (truncation < 1) throw ConfigError("truncation N must be at least 1");
        if (4 * truncation >= mu_.size())
          throw ConfigError("truncation N=" + std::to_string(truncation) +
                            " violates 4N < n for n=" + std::to_string(mu_.size()));
        return BasisTable(mu_.grid(), truncation);
      }()) {
  weights_ = as_vector(mu_.rho().values()) * mu_.grid().weight();
  gram_ = table_.d1.transpose() * weights_.asDiagonal() * table_.d1;
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success) throw ConditioningError("Galerkin Gram matrix is not positive definite");
}

Eigen::VectorXd WeightedOperatorContext::solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }

Eigen::MatrixXd WeightedOperatorContext::solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }

ScalarField div_mu(const ScalarField& xi, const WeightedOperatorContext& ctx) {
  check_grid(xi.grid(), ctx);
  ScalarField flux = deriv(xi * ctx.mu().rho(), 1);
  for (int j = 0; j < flux.size(); ++j) flux[j] /= ctx.mu()[j];
  return flux;
}

ScalarField laplace_mu(const ScalarField& psi, const WeightedOperatorContext& ctx) {
  return -div_mu(deriv(psi, 1), ctx);
}

ScalarField codifferential_mu(const OneForm& omega, const WeightedOperatorContext& ctx) {
  return -div_mu(sharp(omega), ctx);
}

GreenSolution green_mu(const ScalarField& f, const WeightedOperatorContext& ctx) {
  check_grid(f.grid(), ctx);
  const Eigen::VectorXd fv = as_vector(f.values());
  const double mean = ctx.mu_weights().dot(fv);
  if (std::abs(mean) > kGreenMeanTolerance)
    throw CompatibilityError("Green operator input has mu-mean " + std::to_string(mean));
  const Eigen::VectorXd centred = fv.array() - mean;
  const Eigen::VectorXd b = ctx.table().phi.transpose() * (ctx.mu_weights().asDiagonal() * centred);
  const Eigen::VectorXd c = ctx.solve(b);
  Eigen::VectorXd phi = ctx.table().phi * c;
  phi.array() -= ctx.mu_weights().dot(phi);
  return {ScalarField(ctx.grid(), std::vector<double>(phi.data(), phi.data() + phi.size())), mean};
}

Eigen::VectorXd exact_moments(const OneForm& omega, const WeightedOperatorContext& ctx) {
  check_grid(omega.grid(), ctx);
  return ctx.table().d1.transpose() * (ctx.mu_weights().asDiagonal() * as_vector(omega.values()));
}

ExactProjection project_exact(const OneForm& omega, const WeightedOperatorContext& ctx) {
  Eigen::VectorXd c = ctx.solve(exact_moments(omega, ctx));
  const Eigen::VectorXd v = ctx.table().phi * c;
  const Eigen::VectorXd dv = ctx.table().d1 * c;
  ScalarField potential(ctx.grid(), std::vector<double>(v.data(), v.data() + v.size()));
  OneForm residual = omega;
  for (int j = 0; j < residual.size(); ++j) residual[j] -= dv[j];
  return {std::move(c), std::move(potential), std::move(residual)};
}

}  // namespace wgeom
