#pragma once

#include <cstdint>

#include "wgeom/circle_grid.hpp"

namespace wgeom {

// A smooth, strictly positive probability density rho with respect to the
// normalized volume of the circle: mu = rho * vol.
class Density {
 public:
  const ScalarField& rho() const { return rho_; }
  const GridSpec& grid() const { return rho_.grid(); }
  int size() const { return rho_.size(); }
  double operator[](int j) const { return rho_[j]; }

  double min() const;
  double max() const;
  // Mass of the values handed to make_density, before rescaling.
  double input_mass() const { return input_mass_; }

  bool operator==(const Density& other) const;

 private:
  friend Density make_density(const ScalarField& values);
  Density(ScalarField rho, double input_mass) : rho_(std::move(rho)), input_mass_(input_mass) {}

  ScalarField rho_;
  double input_mass_;
};

// Rescales positive node values to unit mass. Throws DomainError on any value <= 0.
Density make_density(const ScalarField& values);
Density uniform_density(const GridSpec& grid);

// integrate(f * g * rho)
double weighted_inner(const ScalarField& f, const ScalarField& g, const Density& mu);
double weighted_inner(const OneForm& f, const OneForm& g, const Density& mu);

// Push mu forward by the circle map x -> x + displacement(x). The map must be
// orientation preserving (1 + displacement' > 0, checked on a 4x refined
// sample) or FoldError is thrown. New node values come from the exact 1-D
// Jacobian formula rho(x) / (1 + displacement'(x)) at the preimage x of each
// node; the preimage is found by safeguarded Newton on the trigonometric
// interpolant. The result is not renormalized.
ScalarField pushforward_values(const Density& mu, const ScalarField& displacement);

// pushforward_values followed by renormalization to unit mass.
Density pushforward_monotone(const Density& mu, const ScalarField& displacement);

// Preimages x_j with x_j + displacement(x_j) = node j, for an orientation
// preserving map. The lifted x_j may fall outside [0, 2pi).
std::vector<double> preimages(const ScalarField& displacement);

// Smallest value of 1 + d'(x) over a 4x refined sample of the circle.
double min_jacobian(const ScalarField& displacement);

// FNV-1a hash of the node values; used to tag exported tensors with their base.
std::uint64_t density_hash(const Density& mu);

}  // namespace wgeom
