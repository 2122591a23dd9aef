#include "wgeom/density.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "wgeom/errors.hpp"

namespace wgeom {

double Density::min() const {
  return *std::min_element(rho_.values().begin(), rho_.values().end());
}

double Density::max() const {
  return *std::max_element(rho_.values().begin(), rho_.values().end());
}

bool Density::operator==(const Density& other) const {
  if (!(grid() == other.grid())) return false;
  return std::equal(rho_.values().begin(), rho_.values().end(), other.rho_.values().begin());
}

Density make_density(const ScalarField& values) {
  for (int j = 0; j < values.size(); ++j) {
    if (!(values[j] > 0.0))
      throw DomainError("density value " + std::to_string(values[j]) + " at node " +
                        std::to_string(j) + " is not positive");
  }
  const double mass = integrate(values);
  return Density(values * (1.0 / mass), mass);
}

Density uniform_density(const GridSpec& grid) {
  return make_density(ScalarField(grid, std::vector<double>(grid.size(), 1.0)));
}

double weighted_inner(const ScalarField& f, const ScalarField& g, const Density& mu) {
  if (!(f.grid() == g.grid()) || !(f.grid() == mu.grid()))
    throw ShapeError("weighted_inner operands live on different grids");
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f[j] * g[j] * mu[j];
  return s / f.size();
}

double weighted_inner(const OneForm& f, const OneForm& g, const Density& mu) {
  return weighted_inner(sharp(f), sharp(g), mu);
}

double min_jacobian(const ScalarField& displacement) {
  const TrigInterpolant t(displacement);
  const int samples = 4 * displacement.size();
  double m = 1.0 + t.d1(0.0);
  for (int j = 1; j < samples; ++j) m = std::min(m, 1.0 + t.d1(kTwoPi * j / samples));
  return m;
}

namespace {

// Solve x + T(x) = y for the lifted, strictly increasing map.
double invert_monotone(const TrigInterpolant& t, double y, double bound) {
  double lo = y - bound - 1e-12;
  double hi = y + bound + 1e-12;
  double x = y - t.value(y);
  for (int it = 0; it < 100; ++it) {
    const double f = x + t.value(x) - y;
    if (f > 0.0) hi = x; else lo = x;
    const double df = 1.0 + t.d1(x);
    double next = x - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<double> preimages(const ScalarField& displacement) {
  const TrigInterpolant t(displacement);
  const double bound = displacement.max_abs() * 1.01 + 1e-3;
  const GridSpec& g = displacement.grid();
  std::vector<double> x(g.size());
  for (int j = 0; j < g.size(); ++j) x[j] = invert_monotone(t, g.node(j), bound);
  return x;
}

ScalarField pushforward_values(const Density& mu, const ScalarField& displacement) {
  if (!(mu.grid() == displacement.grid()))
    throw ShapeError("density and displacement live on different grids");
  const double jmin = min_jacobian(displacement);
  if (jmin <= 0.0)
    throw FoldError("displacement map folds the circle (min 1 + T' = " + std::to_string(jmin) + ")");

  const TrigInterpolant t(displacement);
  const TrigInterpolant rho(mu.rho());
  const std::vector<double> x = preimages(displacement);
  ScalarField out(mu.grid());
  for (int j = 0; j < out.size(); ++j) out[j] = rho.value(x[j]) / (1.0 + t.d1(x[j]));
  return out;
}

Density pushforward_monotone(const Density& mu, const ScalarField& displacement) {
  return make_density(pushforward_values(mu, displacement));
}

std::uint64_t density_hash(const Density& mu) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(mu.size()));
  for (double v : mu.rho().values()) mix(std::bit_cast<std::uint64_t>(v));
  return h;
}

}  // namespace wgeom
