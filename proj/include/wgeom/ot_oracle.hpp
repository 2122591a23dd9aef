#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wgeom/density.hpp"

namespace wgeom {

// Weighted point masses on the circle.
struct Atoms {
  std::vector<double> positions;
  std::vector<double> weights;
};

// m atoms of mass 1/m: the quantile cells [F^{-1}(i/m), F^{-1}((i+1)/m)] of mu,
// each placed at its barycentre.
Atoms discretize(const Density& mu, int m);

// Geodesic distance on the circle of circumference 2*pi.
double circle_distance(double x, double y);

struct Coupling {
  Eigen::MatrixXd matrix;  // rows: source atoms, columns: target atoms
  Atoms source;
  Atoms target;
};

struct TransportResult {
  double w2 = 0.0;
  std::optional<double> shift;  // optimal cut offset of the circular reduction
  std::optional<Coupling> coupling;
};

struct CouplingReport {
  double max_marginal_violation = 0.0;
  int negative_entries = 0;
  double min_entry = 0.0;
  bool valid(double tol) const { return negative_entries == 0 && max_marginal_violation <= tol; }
};

// Exact W2 between densities on the circle. The quantile functions are
// sampled at `samples` points and the cut offset is found by golden-section
// search on the convex reduced cost.
TransportResult w2_circle_exact(const Density& mu, const Density& nu, int samples = 1024);

// Discrete transportation problem with squared circular distance, solved by
// the transportation simplex (MODI duals, Dantzig pricing with a Bland
// fallback once degenerate pivots stall). Throws DomainError if the total
// masses differ by more than 1e-9.
TransportResult solve_transport(const Atoms& source, const Atoms& target);

// solve_transport on the m-cell discretizations of mu and nu. m must be in 2..256.
TransportResult w2_lp(const Density& mu, const Density& nu, int m);

CouplingReport coupling_check(const Coupling& pi);
Coupling product_coupling(const Atoms& source, const Atoms& target);
double coupling_cost(const Coupling& pi);

}  // namespace wgeom
