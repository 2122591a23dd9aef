#include "wgeom/tangent.hpp"

#include <Eigen/Eigenvalues>

#include "wgeom/errors.hpp"
#include "wgeom/operators.hpp"

namespace wgeom {

TangentVector::TangentVector(Density base, Eigen::VectorXd coeffs)
    : base_(std::move(base)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0 || coeffs_.size() % 2 != 0)
    throw ShapeError("tangent coefficients must have positive even length");
}

TangentVector TangentVector::zero(Density base, int truncation) {
  return TangentVector(std::move(base), Eigen::VectorXd::Zero(basis_size(truncation)));
}

ScalarField TangentVector::potential() const { return synthesize(base_.grid(), coeffs_); }

namespace {

void check_compatible(const TangentVector& a, const TangentVector& b) {
  if (a.coeffs().size() != b.coeffs().size())
    throw DomainError("tangent vectors have different truncations");
  if (!(a.base() == b.base())) throw DomainError("tangent vectors live at different densities");
}

}  // namespace

TangentVector& TangentVector::operator+=(const TangentVector& other) {
  check_compatible(*this, other);
  coeffs_ += other.coeffs_;
  return *this;
}

TangentVector& TangentVector::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

GramMatrix metric_gram(const Density& mu, int truncation) {
  const WeightedOperatorContext ctx(mu, truncation);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ctx.gram(), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return {ctx.gram(), mu, condition};
}

double otto_inner(const TangentVector& v, const TangentVector& w) {
  check_compatible(v, w);
  const GramMatrix g = metric_gram(v.base(), v.truncation());
  return v.coeffs().dot(g.entries * w.coeffs());
}

double observable(const ScalarField& phi, const Density& mu) {
  return weighted_inner(phi, ScalarField(phi.grid(), std::vector<double>(phi.size(), 1.0)), mu);
}

double observable_derivative(const ScalarField& psi, const ScalarField& phi, const Density& mu) {
  return weighted_inner(deriv(phi, 1), deriv(psi, 1), mu);
}

double observable_derivative(const TangentVector& v, const ScalarField& phi) {
  return observable_derivative(v.potential(), phi, v.base());
}

namespace {

std::vector<double> flow_nodes(const TrigInterpolant& vel, const GridSpec& g, double t, int steps) {
  const double h = t / steps;
  std::vector<double> x = g.nodes();
  for (double& xi : x) {
    for (int s = 0; s < steps; ++s) {
      const double k1 = vel.d1(xi);
      const double k2 = vel.d1(xi + 0.5 * h * k1);
      const double k3 = vel.d1(xi + 0.5 * h * k2);
      const double k4 = vel.d1(xi + h * k3);
      xi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return x;
}

}  // namespace

Density flow_constant_field(const ScalarField& psi, const Density& mu0, double t,
                            const FlowOptions& options) {
  if (!(psi.grid() == mu0.grid())) throw ShapeError("potential and density live on different grids");
  if (t == 0.0) return mu0;
  const TrigInterpolant vel(psi);
  const GridSpec& g = mu0.grid();

  int per_unit = options.steps_per_unit_time;
  auto steps_for = [&](int pu) { return std::max(1, static_cast<int>(std::ceil(pu * std::abs(t)))); };
  std::vector<double> coarse = flow_nodes(vel, g, t, steps_for(per_unit));
  for (;;) {
    if (2 * per_unit > options.max_steps_per_unit_time)
      throw StiffnessError("flow step control exhausted at " + std::to_string(per_unit) +
                           " steps per unit time");
    std::vector<double> fine = flow_nodes(vel, g, t, steps_for(2 * per_unit));
    double diff = 0.0;
    for (std::size_t j = 0; j < fine.size(); ++j) diff = std::max(diff, std::abs(fine[j] - coarse[j]));
    coarse = std::move(fine);
    per_unit *= 2;
    if (diff <= options.tolerance) break;
  }

  ScalarField displacement(g);
  for (int j = 0; j < g.size(); ++j) displacement[j] = coarse[j] - g.node(j);
  return pushforward_monotone(mu0, displacement);
}

double flow_speed_squared(const ScalarField& psi, const Density& mu) {
  const ScalarField d = deriv(psi, 1);
  return weighted_inner(d, d, mu);
}

TangentVector remap_to_vol(const TangentVector& v) {
  const Density vol = uniform_density(v.base().grid());
  const WeightedOperatorContext ctx(vol, v.truncation());
  const OneForm moved = flat(deriv(v.potential(), 1) * v.base().rho());
  return TangentVector(vol, project_exact(moved, ctx).coeffs);
}

}  // namespace wgeom
