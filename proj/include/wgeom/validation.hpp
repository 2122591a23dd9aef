#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgeom/density.hpp"

namespace wgeom {

// Portable deterministic sampling (splitmix64), independent of the standard
// library's distribution implementations.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform(double lo, double hi);

 private:
  std::uint64_t state_;
};

// rho proportional to exp(sum_{k<=modes} a_k cos kx + b_k sin kx), a_k, b_k ~ U[-amplitude, amplitude].
Density random_smooth_density(const GridSpec& grid, SplitMix& rng, int modes, double amplitude);

// Basis coefficients (length 2N) with modes 1..active drawn from U[-amplitude, amplitude].
Eigen::VectorXd random_coeffs(SplitMix& rng, int truncation, int active, double amplitude);

enum class Relation { AtMost, AtLeast, Above };

struct Check {
  std::string name;
  double measured;
  double tolerance;
  Relation relation = Relation::AtMost;
  bool pass() const;
  const char* symbol() const;
};

struct CriterionResult {
  int id;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool pass() const;
};

struct AcceptanceConfig {
  int n = 256;
  int truncation = 8;             // Gram, brackets, connection, curvature
  int route_truncation = 16;      // Christoffel route and parallel transport
  int coarse_route_truncation = 8;
  double epsilon = 0.1;           // psi0 = epsilon cos x
  int path_samples = 101;
  int speed_samples = 11;
  int random_pairs = 50;
  int ot_pairs = 20;
  int lp_atoms = 64;
  int fd_truncation = 4;
  double fd_step = 1e-3;
  std::uint64_t seed = 1;
};

// Runs the acceptance criteria with ids in `only` (all when empty).
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config, const std::vector<int>& only = {});

// "[PASS] 4 geodesic route agreement: name=value (<= tol); ..."
std::string summary_line(const CriterionResult& r);

}  // namespace wgeom
