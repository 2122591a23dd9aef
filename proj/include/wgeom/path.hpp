#pragma once

#include <string>
#include <vector>

#include "wgeom/circle_grid.hpp"
#include "wgeom/density.hpp"

namespace wgeom {

// A sampled curve t -> mu_t = rho_t vol with velocity potentials psi_t.
// Potentials are stored mu_t-de-meaned.
struct GeodesicPath {
  std::string route;
  int truncation = 0;  // 0 when the potentials are not truncated to a basis span
  std::vector<double> times;
  std::vector<Density> densities;
  std::vector<ScalarField> potentials;

  std::size_t size() const { return times.size(); }
  // Throws DomainError on unequal lengths or non-increasing times.
  void validate() const;
};

// Subtracts the mu-mean so the potential is the canonical representative.
ScalarField demean(const ScalarField& psi, const Density& mu);

}  // namespace wgeom
