#include "wgeom/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>

#include "wgeom/connection.hpp"
#include "wgeom/curvature.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/geodesics.hpp"
#include "wgeom/operators.hpp"
#include "wgeom/ot_oracle.hpp"
#include "wgeom/tangent.hpp"

namespace wgeom {

std::uint64_t SplitMix::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

Density random_smooth_density(const GridSpec& grid, SplitMix& rng, int modes, double amplitude) {
  std::vector<double> a(modes), b(modes);
  for (int k = 0; k < modes; ++k) {
    a[k] = rng.uniform(-amplitude, amplitude);
    b[k] = rng.uniform(-amplitude, amplitude);
  }
  return make_density(sample(grid, [&](double x) {
    double s = 0.0;
    for (int k = 0; k < modes; ++k) s += a[k] * std::cos((k + 1) * x) + b[k] * std::sin((k + 1) * x);
    return std::exp(s);
  }));
}

Eigen::VectorXd random_coeffs(SplitMix& rng, int truncation, int active, double amplitude) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(basis_size(truncation));
  for (int i = 0; i < basis_size(std::min(active, truncation)); ++i) c[i] = rng.uniform(-amplitude, amplitude);
  return c;
}

bool Check::pass() const {
  switch (relation) {
    case Relation::AtMost: return measured <= tolerance;
    case Relation::AtLeast: return measured >= tolerance;
    case Relation::Above: return measured > tolerance;
  }
  return false;
}

const char* Check::symbol() const {
  switch (relation) {
    case Relation::AtMost: return "<=";
    case Relation::AtLeast: return ">=";
    case Relation::Above: return ">";
  }
  return "?";
}

bool CriterionResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

std::string summary_line(const CriterionResult& r) {
  std::string s = std::string(r.pass() ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ":";
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const Check& c = r.checks[i];
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %s=%.3e (%s %.0e)", i ? ";" : "", c.name.c_str(), c.measured,
                  c.symbol(), c.tolerance);
    s += buf;
  }
  return s;
}

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Geodesic data shared by several criteria, built on first use.
class GeodesicScenario {
 public:
  explicit GeodesicScenario(const AcceptanceConfig& c)
      : cfg_(c), grid_(make_grid(c.n)), vol_(uniform_density(grid_)),
        psi0_(sample(grid_, [&](double x) { return c.epsilon * std::cos(x); })) {}

  const GridSpec& grid() const { return grid_; }
  const Density& vol() const { return vol_; }
  const ScalarField& psi0() const { return psi0_; }

  const std::vector<double>& times() {
    if (times_.empty()) times_ = uniform_times(cfg_.path_samples);
    return times_;
  }
  const GeodesicPath& hj() {
    if (!hj_) {
      hj_ = geodesic_hj(vol_, psi0_, times());
      hj_->truncation = cfg_.route_truncation;
    }
    return *hj_;
  }
  const GeodesicPath& christoffel_route(int truncation) {
    auto& slot = ch_[truncation];
    if (!slot) slot = geodesic_christoffel(vol_, basis_coefficients(psi0_, truncation), times());
    return *slot;
  }
  const GeodesicPath& displacement() {
    if (!dp_) dp_ = displacement_path(vol_, psi0_, times());
    return *dp_;
  }
  double w2_endpoints() {
    if (!w2_) w2_ = w2_circle_exact(hj().densities.front(), hj().densities.back()).w2;
    return *w2_;
  }
  double route_gap(int truncation) {
    const GeodesicPath& c = christoffel_route(truncation);
    return std::max({max_density_gap(hj(), c), max_density_gap(hj(), displacement()),
                     max_density_gap(c, displacement())});
  }

 private:
  AcceptanceConfig cfg_;
  GridSpec grid_;
  Density vol_;
  ScalarField psi0_;
  std::vector<double> times_;
  std::optional<GeodesicPath> hj_, dp_;
  std::map<int, std::optional<GeodesicPath>> ch_;
  std::optional<double> w2_;
};

// Every stride-th sample of a path; the sample count must divide evenly.
GeodesicPath subsample(const GeodesicPath& path, int count) {
  const int last = static_cast<int>(path.size()) - 1;
  if (count < 2 || last % (count - 1) != 0)
    throw ConfigError("speed_samples - 1 must divide path_samples - 1");
  const int stride = last / (count - 1);
  GeodesicPath out;
  out.route = path.route;
  out.truncation = path.truncation;
  for (int i = 0; i <= last; i += stride) {
    out.times.push_back(path.times[i]);
    out.densities.push_back(path.densities[i]);
    out.potentials.push_back(path.potentials[i]);
  }
  return out;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

ScalarField random_potential(SplitMix& rng, const GridSpec& grid, int truncation, int active) {
  return synthesize(grid, random_coeffs(rng, truncation, active, 1.0));
}

CriterionResult gram_diagonal(const AcceptanceConfig& c) {
  const GridSpec grid = make_grid(c.n);
  const GramMatrix g = metric_gram(uniform_density(grid), c.truncation);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(g.entries.rows(), g.entries.cols());
  for (int i = 0; i < expected.rows(); ++i) {
    const int k = basis_index(i).mode;
    expected(i, i) = double(k) * k;
  }
  const double err = (g.entries - expected).cwiseAbs().maxCoeff();
  return {1, "Gram diagonalization at vol", {{"max_abs_error", err, 1e-12}}, {}};
}

CriterionResult brackets(const AcceptanceConfig& c) {
  SplitMix rng(c.seed ^ 0x0b7ac4e7ull);
  const GridSpec grid = make_grid(c.n);
  const WeightedOperatorContext ctx(random_smooth_density(grid, rng, 2, 0.3), c.truncation);
  const int active = std::max(1, c.truncation / 2);
  double anti = 0.0, forms = 0.0, sign = 0.0;
  for (int p = 0; p < c.random_pairs; ++p) {
    const ScalarField a = random_potential(rng, grid, c.truncation, active);
    const ScalarField b = random_potential(rng, grid, c.truncation, active);
    const Eigen::VectorXd ab = lie_bracket(a, b, ctx).coeffs();
    const Eigen::VectorXd ba = lie_bracket(b, a, ctx).coeffs();
    const Eigen::VectorXd pos = lie_bracket_divergence_form(a, b, ctx, LaplacianSign::Positive).coeffs();
    const Eigen::VectorXd neg = lie_bracket_divergence_form(a, b, ctx, LaplacianSign::Negative).coeffs();
    anti = std::max(anti, max_abs(ab + ba));
    forms = std::max(forms, max_abs(ab - pos));
    sign = std::max(sign, max_abs(pos - neg));
  }
  return {2,
          "bracket identities",
          {{"antisymmetry", anti, 1e-9},
           {"projection_vs_divergence_form", forms, 1e-8},
           {"sign_invariance", sign, 1e-10}},
          {}};
}

CriterionResult connection_identities(const AcceptanceConfig& c) {
  SplitMix rng(c.seed ^ 0xc0e1c710ull);
  const GridSpec grid = make_grid(c.n);
  const Density mu = random_smooth_density(grid, rng, 2, 0.3);
  const WeightedOperatorContext ctx(mu, c.truncation);
  const int active = std::max(1, c.truncation / 2);
  double koszul = 0.0, torsion = 0.0;
  for (int p = 0; p < c.random_pairs; ++p) {
    const ScalarField a = random_potential(rng, grid, c.truncation, active);
    const ScalarField b = random_potential(rng, grid, c.truncation, active);
    const Eigen::VectorXd nab = covariant_derivative(a, b, ctx).coeffs();
    const Eigen::VectorXd nba = covariant_derivative(b, a, ctx).coeffs();
    const Eigen::VectorXd br = lie_bracket(a, b, ctx).coeffs();
    const Eigen::VectorXd grad = basis_coefficients(deriv(a, 1) * deriv(b, 1), c.truncation);
    koszul = std::max(koszul, max_abs(nab - 0.5 * grad - 0.5 * br));
    torsion = std::max(torsion, max_abs(nab - nba - br));
  }

  // V_i <V_j, V_k> by central differences along the constant-field flow.
  const ChristoffelTensor gamma = christoffel(ctx);
  const int frame = std::min(4, ctx.dim());
  std::vector<ScalarField> phi;
  for (int i = 0; i < frame; ++i) phi.push_back(basis(basis_index(i).mode, basis_index(i).parity, grid));
  auto metric = [&](const Density& m, int j, int k) { return observable_derivative(phi[j], phi[k], m); };
  CriterionResult r{3, "connection identities",
                    {{"koszul_expansion_residual", koszul, 1e-8}, {"torsion_identity", torsion, 1e-8}},
                    {}};
  double best = std::numeric_limits<double>::infinity();
  for (double h : {1e-2, 1e-3, 1e-4}) {
    double err = 0.0;
    for (int i = 0; i < frame; ++i) {
      const Density plus = flow_constant_field(phi[i], mu, h);
      const Density minus = flow_constant_field(phi[i], mu, -h);
      for (int j = 0; j < frame; ++j) {
        for (int k = 0; k < frame; ++k) {
          const double fd = (metric(plus, j, k) - metric(minus, j, k)) / (2.0 * h);
          Eigen::VectorXd gij(ctx.dim()), gik(ctx.dim());
          for (int q = 0; q < ctx.dim(); ++q) {
            gij[q] = gamma(q, i, j);
            gik[q] = gamma(q, i, k);
          }
          const double exact = ctx.gram().row(k).dot(gij) + ctx.gram().row(j).dot(gik);
          err = std::max(err, std::abs(fd - exact));
        }
      }
    }
    r.notes.push_back(fmt("metric compatibility h=%.0e: max error %.3e", h, err));
    best = std::min(best, err);
  }
  r.checks.push_back({"metric_compatibility_fd", best, 1e-6});
  return r;
}

CriterionResult route_agreement(const AcceptanceConfig& c, GeodesicScenario& s) {
  const double gap = s.route_gap(c.route_truncation);
  const double cont = std::max({continuity_residual(s.hj()), continuity_residual(s.christoffel_route(c.route_truncation)),
                                continuity_residual(s.displacement())});
  return {4, "geodesic route agreement",
          {{"max_density_gap", gap, 1e-4}, {"continuity_residual", cont, 1e-5}}, {}};
}

DistanceOracle exact_oracle() {
  return [](const Density& a, const Density& b) { return w2_circle_exact(a, b).w2; };
}

CriterionResult constant_speed(const AcceptanceConfig& c, GeodesicScenario& s) {
  const ConstantSpeedReport rep = constant_speed_report(subsample(s.hj(), c.speed_samples), exact_oracle());
  const double anchor = std::abs(s.w2_endpoints() - c.epsilon / std::sqrt(2.0));
  CriterionResult r{5, "constant speed",
                    {{"max_ratio_deviation", rep.max_abs_deviation, 1e-3}, {"analytic_anchor_error", anchor, 1e-4}},
                    {}};
  r.notes.push_back(fmt("relative ratio deviation %.3e", rep.max_rel_deviation));
  return r;
}

CriterionResult action_distance(const AcceptanceConfig&, GeodesicScenario& s) {
  const double w2 = s.w2_endpoints();
  const double err = std::abs(action(s.hj()) - w2 * w2);
  return {6, "action equals squared distance", {{"action_minus_w2_squared", err, 1e-4}}, {}};
}

CriterionResult non_geodesic(const AcceptanceConfig& c, GeodesicScenario& s) {
  const GeodesicPath flow = flow_path(s.vol(), s.psi0(), uniform_times(c.speed_samples));
  const ConstantSpeedReport rep = constant_speed_report(flow, exact_oracle());
  CriterionResult r{7, "non-geodesic contrast", {{"flow_relative_ratio_deviation", rep.max_rel_deviation, 1e-2, Relation::Above}}, {}};
  r.notes.push_back(fmt("absolute ratio deviation %.3e", rep.max_abs_deviation));
  return r;
}

CriterionResult curvature_checks(const AcceptanceConfig& c) {
  SplitMix rng(c.seed ^ 0xc0a7u);
  const GridSpec grid = make_grid(c.n);
  const Density vol = uniform_density(grid);
  const WeightedOperatorContext vctx(vol, std::max(2, c.truncation));
  const double k = sectional(basis(1, Parity::Cos, grid), basis(1, Parity::Sin, grid), vctx);

  const WeightedOperatorContext ctx(random_smooth_density(grid, rng, 2, 0.3), c.truncation);
  const int active = std::max(1, c.truncation / 2);
  double sym = 0.0, bianchi = 0.0;
  for (int q = 0; q < 20; ++q) {
    ScalarField p[4] = {random_potential(rng, grid, c.truncation, active), random_potential(rng, grid, c.truncation, active),
                        random_potential(rng, grid, c.truncation, active), random_potential(rng, grid, c.truncation, active)};
    const double r1234 = riemann(p[0], p[1], p[2], p[3], ctx);
    sym = std::max({sym, std::abs(r1234 + riemann(p[1], p[0], p[2], p[3], ctx)),
                    std::abs(r1234 + riemann(p[0], p[1], p[3], p[2], ctx)),
                    std::abs(r1234 - riemann(p[2], p[3], p[0], p[1], ctx))});
    bianchi = std::max(bianchi, std::abs(r1234 + riemann(p[1], p[2], p[0], p[3], ctx) + riemann(p[2], p[0], p[1], p[3], ctx)));
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (int q = 0; q < c.random_pairs; ++q)
    lowest = std::min(lowest, sectional(random_potential(rng, grid, c.truncation, active),
                                        random_potential(rng, grid, c.truncation, active), ctx));

  double rel = 0.0, flat = 0.0;
  const int frame = basis_size(std::min(2, c.fd_truncation));
  for (int a = 0; a < frame; ++a)
    for (int b = 0; b < frame; ++b)
      for (int j = 0; j < frame; ++j)
        for (int m = 0; m < frame; ++m) {
          const FdCurvature f = riemann_fd_oracle(a, b, j, m, vol, c.fd_truncation, c.fd_step);
          if (std::abs(f.theorem) > 1e-8) rel = std::max(rel, f.rel_error);
          else flat = std::max(flat, f.abs_error);
        }
  return {8,
          "curvature",
          {{"sectional_cos1_sin1_error", std::abs(k - 3.0), 1e-6},
           {"symmetry_residual", sym, 1e-8},
           {"first_bianchi", bianchi, 1e-8},
           {"negated_min_sectional", -lowest, 1e-10},
           {"fd_oracle_rel_error", rel, 1e-3},
           {"fd_oracle_flat_abs_error", flat, 1e-6}},
          {fmt("sectional(cos1, sin1) at vol = %.15g", k), fmt("min sampled sectional curvature %.6e", lowest)}};
}

CriterionResult t_antisymmetry(const AcceptanceConfig& c) {
  SplitMix rng(c.seed ^ 0x7e250000ull);
  const GridSpec grid = make_grid(c.n);
  const WeightedOperatorContext ctx(random_smooth_density(grid, rng, 2, 0.3), c.truncation);
  const int active = std::max(1, c.truncation / 2);
  double worst = 0.0;
  for (int p = 0; p < c.random_pairs; ++p) {
    const ScalarField a = random_potential(rng, grid, c.truncation, active);
    const ScalarField b = random_potential(rng, grid, c.truncation, active);
    const OneForm sum = t_tensor(a, b, ctx).residual + t_tensor(b, a, ctx).residual;
    worst = std::max(worst, sum.max_abs());
  }
  return {9, "T-tensor antisymmetry", {{"max_residual", worst, 1e-9}}, {}};
}

CriterionResult oracle_cross_validation(const AcceptanceConfig& c) {
  SplitMix rng(c.seed ^ 0x07ac1eull);
  const GridSpec grid = make_grid(c.n);
  double rel = 0.0, violation = 0.0, negatives = 0.0;
  for (int p = 0; p < c.ot_pairs; ++p) {
    const Density a = random_smooth_density(grid, rng, 3, 0.6);
    const Density b = random_smooth_density(grid, rng, 3, 0.6);
    const double exact = w2_circle_exact(a, b).w2;
    const TransportResult lp = w2_lp(a, b, c.lp_atoms);
    const CouplingReport cr = coupling_check(*lp.coupling);
    rel = std::max(rel, std::abs(lp.w2 - exact) / exact);
    violation = std::max(violation, cr.max_marginal_violation);
    negatives += cr.negative_entries;
  }
  double slack = std::numeric_limits<double>::infinity();
  for (int p = 0; p < c.ot_pairs; ++p) {
    const Density a = random_smooth_density(grid, rng, 3, 0.6);
    const Density b = random_smooth_density(grid, rng, 3, 0.6);
    const Density d = random_smooth_density(grid, rng, 3, 0.6);
    const double ab = w2_circle_exact(a, b).w2, bd = w2_circle_exact(b, d).w2, ad = w2_circle_exact(a, d).w2;
    slack = std::min(slack, ab + bd - ad);
  }
  return {10,
          "oracle cross-validation",
          {{"lp_vs_exact_rel_error", rel, 2e-2},
           {"coupling_marginal_violation", violation, 1e-9},
           {"coupling_negative_entries", negatives, 0.0},
           {"negated_triangle_slack", -slack, 1e-6}},
          {}};
}

CriterionResult transport(const AcceptanceConfig& c, GeodesicScenario& s) {
  SplitMix rng(c.seed ^ 0x7a2a11e1ull);
  const GeodesicPath& path = s.hj();
  const int trunc = c.route_truncation;
  const TangentVector eta0(s.vol(), random_coeffs(rng, trunc, 4, 0.1));
  const double n0 = std::sqrt(otto_inner(eta0, eta0));
  double drift = 0.0;
  for (const TangentVector& e : parallel_transport(eta0, path))
    drift = std::max(drift, std::abs(std::sqrt(otto_inner(e, e)) - n0));

  const TangentVector v0(s.vol(), basis_coefficients(path.potentials.front(), trunc));
  const std::vector<TangentVector> vel = parallel_transport(v0, path);
  double self = 0.0;
  for (std::size_t i = 0; i < vel.size(); ++i) {
    const TangentVector diff(path.densities[i], vel[i].coeffs() - basis_coefficients(path.potentials[i], trunc));
    self = std::max(self, std::sqrt(otto_inner(diff, diff)));
  }
  return {11, "parallel transport", {{"norm_drift", drift, 1e-5}, {"self_parallel_error", self, 1e-5}}, {}};
}

CriterionResult truncation_convergence(const AcceptanceConfig& c, GeodesicScenario& s) {
  const double coarse = s.route_gap(c.coarse_route_truncation);
  const double fine = s.route_gap(c.route_truncation);
  const double ratio = fine > 0.0 ? coarse / fine : std::numeric_limits<double>::infinity();
  CriterionResult r{12, "truncation convergence", {{"error_reduction_ratio", ratio, 4.0, Relation::AtLeast}}, {}};
  r.notes.push_back(fmt("route gap N=coarse %.3e, N=fine %.3e", coarse, fine));
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& c, const std::vector<int>& only) {
  auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  GeodesicScenario scenario(c);
  std::vector<std::pair<int, std::function<CriterionResult()>>> runners = {
      {1, [&] { return gram_diagonal(c); }},
      {2, [&] { return brackets(c); }},
      {3, [&] { return connection_identities(c); }},
      {4, [&] { return route_agreement(c, scenario); }},
      {5, [&] { return constant_speed(c, scenario); }},
      {6, [&] { return action_distance(c, scenario); }},
      {7, [&] { return non_geodesic(c, scenario); }},
      {8, [&] { return curvature_checks(c); }},
      {9, [&] { return t_antisymmetry(c); }},
      {10, [&] { return oracle_cross_validation(c); }},
      {11, [&] { return transport(c, scenario); }},
      {12, [&] { return truncation_convergence(c, scenario); }},
  };
  std::vector<CriterionResult> out;
  for (auto& [id, run] : runners)
    if (wanted(id)) out.push_back(run());
  return out;
}

}  // namespace wgeom
