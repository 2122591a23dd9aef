#include "wgeom/geodesics.hpp"

#include <algorithm>
#include <cmath>

#include "wgeom/connection.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/operators.hpp"
#include "wgeom/tangent.hpp"

namespace wgeom {

void GeodesicPath::validate() const {
  if (densities.size() != times.size() || potentials.size() != times.size())
    throw DomainError("path has " + std::to_string(times.size()) + " times, " +
                      std::to_string(densities.size()) + " densities and " +
                      std::to_string(potentials.size()) + " potentials");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw DomainError("path times must be strictly increasing");
}

ScalarField demean(const ScalarField& psi, const Density& mu) {
  const double m = observable(psi, mu);
  ScalarField out = psi;
  for (double& v : out.values()) v -= m;
  return out;
}

std::vector<double> uniform_times(int count) {
  if (count < 2) throw ConfigError("need at least two times");
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = double(i) / (count - 1);
  return t;
}

double caustic_time(const ScalarField& psi0) {
  const TrigInterpolant p(psi0);
  const int samples = 4 * psi0.size();
  double lowest = 0.0;
  for (int j = 0; j < samples; ++j) lowest = std::min(lowest, p.d2(kTwoPi * j / samples));
  return lowest < 0.0 ? -1.0 / lowest : std::numeric_limits<double>::infinity();
}

namespace {

void check_times(std::span<const double> times) {
  if (times.empty()) throw ConfigError("empty time grid");
  if (times.front() < 0.0) throw ConfigError("times must be nonnegative");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ConfigError("times must be strictly increasing");
}

void check_caustic(const ScalarField& psi0, double horizon) {
  const double tc = caustic_time(psi0);
  if (tc <= horizon)
    throw CausticError("characteristics cross at t=" + std::to_string(tc) + " before t=" +
                           std::to_string(horizon),
                       tc);
}

// Characteristic feet x_j(t) with x_j + t psi0'(x_j) = node j.
std::vector<double> feet(const ScalarField& dpsi0, double t) {
  if (t == 0.0) return dpsi0.grid().nodes();
  return preimages(t * dpsi0);
}

// Integrates the state from t0 to t1 in equal substeps no longer than
// 1 / steps_per_unit_time.
template <class State, class Rhs, class Axpy>
State rk4_advance(State y, double t0, double t1, int steps_per_unit, Rhs&& rhs, Axpy&& axpy) {
  if (t1 <= t0) return y;
  const int steps = std::max(1, static_cast<int>(std::ceil((t1 - t0) * steps_per_unit - 1e-9)));
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    const State k1 = rhs(y, t);
    const State k2 = rhs(axpy(y, 0.5 * h, k1), t + 0.5 * h);
    const State k3 = rhs(axpy(y, 0.5 * h, k2), t + 0.5 * h);
    const State k4 = rhs(axpy(y, h, k3), t + h);
    y = axpy(axpy(axpy(axpy(y, h / 6.0, k1), h / 3.0, k2), h / 3.0, k3), h / 6.0, k4);
    t = t0 + (s + 1) * h;
  }
  return y;
}

}  // namespace

ScalarField hj_potential(const ScalarField& psi0, double t) {
  if (t == 0.0) return psi0;
  const ScalarField d = deriv(psi0, 1);
  const TrigInterpolant p(psi0);
  const TrigInterpolant dp(d);
  const std::vector<double> x = feet(d, t);
  ScalarField out(psi0.grid());
  for (int j = 0; j < out.size(); ++j) {
    const double v = dp.value(x[j]);
    out[j] = p.value(x[j]) + 0.5 * t * v * v;
  }
  return out;
}

GeodesicPath geodesic_hj(const Density& mu0, const ScalarField& psi0, std::span<const double> times,
                         const GeodesicOptions& options) {
  check_times(times);
  check_caustic(psi0, times.back());
  const ScalarField d = deriv(psi0, 1);
  const TrigInterpolant dp(d);

  // Eulerian velocity psi_t' at the nodes: psi0' carried along characteristics.
  auto velocity = [&](double t) {
    const std::vector<double> x = feet(d, t);
    ScalarField v(d.grid());
    for (int j = 0; j < v.size(); ++j) v[j] = dp.value(x[j]);
    return v;
  };
  auto rhs = [&](const ScalarField& rho, double t) { return -deriv(rho * velocity(t), 1); };
  auto axpy = [](const ScalarField& y, double a, const ScalarField& k) { return y + a * k; };

  GeodesicPath path;
  path.route = "hamilton-jacobi";
  ScalarField rho = mu0.rho();
  double t = 0.0;
  for (double target : times) {
    rho = rk4_advance(rho, t, target, options.steps_per_unit_time, rhs, axpy);
    t = target;
    Density mu = make_density(rho);
    path.potentials.push_back(demean(hj_potential(psi0, target), mu));
    path.densities.push_back(std::move(mu));
    path.times.push_back(target);
  }
  return path;
}

GeodesicPath geodesic_christoffel(const Density& mu0, const Eigen::VectorXd& psi0_coeffs,
                                  std::span<const double> times, const GeodesicOptions& options) {
  check_times(times);
  if (psi0_coeffs.size() == 0 || psi0_coeffs.size() % 2 != 0)
    throw ShapeError("potential coefficients must have positive even length");
  const int trunc = static_cast<int>(psi0_coeffs.size() / 2);
  const GridSpec grid = mu0.grid();
  const BasisTable table(grid, trunc);

  struct State {
    Eigen::VectorXd psi;
    ScalarField rho;
  };
  auto rhs = [&](const State& y, double) {
    const WeightedOperatorContext ctx(make_density(y.rho), trunc);
    const ChristoffelTensor gamma = christoffel(ctx);
    const Eigen::VectorXd v = table.d1 * y.psi;
    ScalarField flux(grid, std::vector<double>(v.data(), v.data() + v.size()));
    flux *= y.rho;
    return State{-gamma.contract(y.psi, y.psi), -deriv(flux, 1)};
  };
  auto axpy = [](const State& y, double a, const State& k) {
    return State{y.psi + a * k.psi, y.rho + a * k.rho};
  };

  GeodesicPath path;
  path.route = "christoffel";
  path.truncation = trunc;
  State y{psi0_coeffs, mu0.rho()};
  double t = 0.0;
  for (double target : times) {
    y = rk4_advance(y, t, target, options.steps_per_unit_time, rhs, axpy);
    t = target;
    Density mu = make_density(y.rho);
    path.potentials.push_back(demean(synthesize(grid, y.psi), mu));
    path.densities.push_back(std::move(mu));
    path.times.push_back(target);
  }
  return path;
}

Density displacement_interpolation(const Density& mu0, const ScalarField& psi, double t) {
  if (t == 0.0) return mu0;
  return pushforward_monotone(mu0, t * deriv(psi, 1));
}

GeodesicPath displacement_path(const Density& mu0, const ScalarField& psi, std::span<const double> times) {
  check_times(times);
  GeodesicPath path;
  path.route = "displacement";
  for (double t : times) {
    Density mu = displacement_interpolation(mu0, psi, t);
    path.potentials.push_back(demean(hj_potential(psi, t), mu));
    path.densities.push_back(std::move(mu));
    path.times.push_back(t);
  }
  return path;
}

GeodesicPath flow_path(const Density& mu0, const ScalarField& psi, std::span<const double> times) {
  check_times(times);
  GeodesicPath path;
  path.route = "constant-field-flow";
  for (double t : times) {
    Density mu = flow_constant_field(psi, mu0, t);
    path.potentials.push_back(demean(psi, mu));
    path.densities.push_back(std::move(mu));
    path.times.push_back(t);
  }
  return path;
}

std::vector<double> action_integrand(const GeodesicPath& path) {
  path.validate();
  std::vector<double> out;
  out.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i)
    out.push_back(flow_speed_squared(path.potentials[i], path.densities[i]));
  return out;
}

namespace {

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 3) return true;
  const double h = (t.back() - t.front()) / (t.size() - 1);
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] - t[i - 1] - h) > 1e-12 * std::max(1.0, std::abs(h))) return false;
  return true;
}

}  // namespace

double action(const GeodesicPath& path) {
  const std::vector<double> f = action_integrand(path);
  const auto& t = path.times;
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  if (n % 2 == 1 && n >= 3 && is_uniform(t)) {
    const double h = (t.back() - t.front()) / (n - 1);
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
  }
  double s = 0.0;
  for (std::size_t i = 1; i < n; ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

double continuity_residual(const GeodesicPath& path) {
  path.validate();
  if (path.size() < 5) throw DomainError("continuity residual needs at least five samples");
  if (!is_uniform(path.times)) throw DomainError("continuity residual needs a uniform time grid");
  const double h = path.times[1] - path.times[0];
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < path.size(); ++i) {
    const auto& r = path.densities;
    ScalarField rate = (r[i - 2].rho() - 8.0 * r[i - 1].rho() + 8.0 * r[i + 1].rho() - r[i + 2].rho()) *
                       (1.0 / (12.0 * h));
    const ScalarField res = rate + deriv(r[i].rho() * deriv(path.potentials[i], 1), 1);
    worst = std::max(worst, std::sqrt(integrate(res * res)));
  }
  return worst;
}

double max_density_gap(const GeodesicPath& a, const GeodesicPath& b) {
  if (a.size() != b.size()) throw DomainError("paths have different sample counts");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12) throw DomainError("paths sampled at different times");
    worst = std::max(worst, (a.densities[i].rho() - b.densities[i].rho()).max_abs());
  }
  return worst;
}

ConstantSpeedReport constant_speed_report(const GeodesicPath& path, const DistanceOracle& oracle) {
  path.validate();
  ConstantSpeedReport report{};
  if (path.size() < 2) return report;
  const double span = path.times.back() - path.times.front();
  report.reference = oracle(path.densities.front(), path.densities.back()) / span;
  for (std::size_t a = 0; a < path.size(); ++a) {
    for (std::size_t b = a + 1; b < path.size(); ++b) {
      const double dt = path.times[b] - path.times[a];
      const double ratio = oracle(path.densities[a], path.densities[b]) / dt;
      report.samples.push_back({path.times[a], path.times[b], ratio});
      const double dev = std::abs(ratio - report.reference);
      report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
      if (report.reference > 0.0)
        report.max_rel_deviation = std::max(report.max_rel_deviation, dev / report.reference);
    }
  }
  return report;
}

}  // namespace wgeom
