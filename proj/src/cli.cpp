#include "wgeom/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wgeom/connection.hpp"
#include "wgeom/curvature.hpp"
#include "wgeom/errors.hpp"
#include "wgeom/geodesics.hpp"
#include "wgeom/io.hpp"
#include "wgeom/operators.hpp"
#include "wgeom/ot_oracle.hpp"
#include "wgeom/tangent.hpp"
#include "wgeom/validation.hpp"

namespace wgeom::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

json term(int mode, const char* parity, double amplitude) {
  return {{"mode", mode}, {"parity", parity}, {"amplitude", amplitude}};
}

json default_tolerances() {
  return {{"gram_symmetry", 1e-12},        {"gram_vol_diagonal", 1e-12},   {"bracket_antisymmetry", 1e-9},
          {"bracket_forms", 1e-8},         {"bracket_sign", 1e-10},        {"christoffel_solve", 1e-9},
          {"christoffel_consistency", 1e-8}, {"route_agreement", 1e-4},    {"continuity", 1e-5},
          {"action", 1e-4},                {"constant_speed", 1e-3},       {"transport_norm_drift", 1e-5},
          {"transport_self_parallel", 1e-5}, {"sectional_vol", 1e-6},      {"curvature_symmetry", 1e-8},
          {"sectional_nonnegative", 1e-10}, {"fd_relative", 1e-3},        {"lp_relative", 2e-2},
          {"coupling_marginal", 1e-9}};
}

json default_config() {
  return {{"n", 256},
          {"N", 8},
          {"seed", 1},
          {"density", {{"family", "uniform"}}},
          {"target_density", {{"family", "cosine"}, {"a", 0.5}, {"k", 1}}},
          {"potential", json::array({term(1, "cos", 0.1)})},
          {"second_potential", json::array({term(1, "sin", 0.1)})},
          {"transport_vector", json::array({term(2, "sin", 0.1)})},
          {"time_samples", 21},
          {"atoms", 64},
          {"fd_step", 1e-3},
          {"fd_truncation", 4},
          {"tolerances", default_tolerances()}};
}

struct RunConfig {
  json doc;
  fs::path base_dir;
  fs::path out;

  int n() const { return doc.at("n").get<int>(); }
  int N() const { return doc.at("N").get<int>(); }
  std::uint64_t seed() const { return doc.at("seed").get<std::uint64_t>(); }
  double tol(const std::string& key) const { return doc.at("tolerances").at(key).get<double>(); }
  std::string hash() const { return io::fnv1a_hex(doc.dump()); }
};

void merge_config(json& target, const json& user) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : user.items()) {
    if (!target.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (key == "tolerances") {
      if (!value.is_object()) throw ConfigError("tolerances must be an object");
      for (const auto& [tk, tv] : value.items()) {
        if (!target[key].contains(tk)) throw ConfigError("unknown tolerance '" + tk + "'");
        if (!tv.is_number() || !(tv.get<double>() > 0.0)) throw ConfigError("tolerance '" + tk + "' must be positive");
        target[key][tk] = tv;
      }
    } else {
      target[key] = value;
    }
  }
}

void check_config(const RunConfig& c) {
  try {
    const int n = c.n(), N = c.N();
    make_grid(n);
    if (N < 1 || 4 * N >= n) throw ConfigError("need 1 <= N and 4N < n (N=" + std::to_string(N) + ", n=" + std::to_string(n) + ")");
    if (c.doc.at("time_samples").get<int>() < 5) throw ConfigError("time_samples must be at least 5");
    const int atoms = c.doc.at("atoms").get<int>();
    if (atoms < 2 || atoms > 256) throw ConfigError("atoms must be in 2..256");
    c.seed();
    c.doc.at("fd_step").get<double>();
    c.doc.at("fd_truncation").get<int>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

Density build_density(const json& spec, const GridSpec& grid, const fs::path& base_dir) {
  try {
    const std::string family = spec.at("family").get<std::string>();
    if (family == "uniform") return uniform_density(grid);
    if (family == "cosine") {
      const double a = spec.at("a").get<double>();
      const int k = spec.value("k", 1);
      if (std::abs(a) >= 1.0) throw ConfigError("cosine density needs |a| < 1");
      return make_density(sample(grid, [&](double x) { return 1.0 + a * std::cos(k * x); }));
    }
    if (family == "csv" || family == "json") {
      fs::path p = spec.at("path").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      Density d = family == "csv" ? io::read_density_csv(p) : io::density_from_json(json::parse(io::read_text(p)));
      if (!(d.grid() == grid))
        throw ConfigError("density file has " + std::to_string(d.size()) + " nodes, config says n=" +
                          std::to_string(grid.size()));
      return d;
    }
    throw ConfigError("unknown density family '" + family + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad density spec: ") + e.what());
  }
}

// Sum of amplitude * cos|sin(mode x) terms; modes must lie in 1..max_mode.
ScalarField build_potential(const json& spec, const GridSpec& grid, int max_mode) {
  try {
    if (!spec.is_array()) throw ConfigError("potential must be an array of terms");
    ScalarField out(grid);
    for (const auto& t : spec) {
      const int k = t.at("mode").get<int>();
      const std::string parity = t.at("parity").get<std::string>();
      const double amp = t.at("amplitude").get<double>();
      if (k < 1 || k > max_mode)
        throw ConfigError("potential mode " + std::to_string(k) + " outside 1.." + std::to_string(max_mode));
      if (parity != "cos" && parity != "sin") throw ConfigError("parity must be cos or sin");
      out += sample(grid, [&](double x) { return amp * (parity == "cos" ? std::cos(k * x) : std::sin(k * x)); });
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad potential spec: ") + e.what());
  }
}

struct Report {
  explicit Report(std::string name) : subcommand(std::move(name)) {}

  std::string subcommand;
  std::vector<std::string> tolerance_keys;
  std::vector<Check> checks;
  json results = json::object();
  std::vector<std::string> artifacts;

  void check(const std::string& name, double measured, const RunConfig& c, const std::string& key,
             Relation rel = Relation::AtMost) {
    checks.push_back({name, measured, c.tol(key), rel});
    tolerance_keys.push_back(key);
  }
};

void write_artifact(const RunConfig& c, Report& r, const std::string& name, const std::string& text) {
  io::write_text(c.out / name, text);
  r.artifacts.push_back(name);
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& k : checks)
    out.push_back({{"name", k.name}, {"measured", k.measured}, {"tolerance", k.tolerance},
                   {"relation", k.symbol()}, {"pass", k.pass()}});
  return out;
}

int finish(const RunConfig& c, Report& r) {
  bool ok = true;
  for (const auto& k : r.checks) ok = ok && k.pass();
  json tolerances = json::object();
  for (const auto& key : r.tolerance_keys) tolerances[key] = c.tol(key);
  r.artifacts.push_back(r.subcommand + ".json");
  const json report = {{"schema_version", io::kSchemaVersion},
                       {"subcommand", r.subcommand},
                       {"config_hash", c.hash()},
                       {"config", c.doc},
                       {"tolerances", tolerances},
                       {"checks", checks_json(r.checks)},
                       {"results", r.results},
                       {"artifacts", r.artifacts},
                       {"status", ok ? "ok" : "tolerance_breach"}};
  io::write_text(c.out / (r.subcommand + ".json"), io::dump(report));
  for (const auto& k : r.checks)
    std::cout << (k.pass() ? "  ok   " : "  FAIL ") << k.name << " = " << k.measured << " (" << k.symbol() << " "
              << k.tolerance << ")\n";
  std::cout << r.subcommand << ": " << (ok ? "ok" : "tolerance breach") << ", report " << (c.out / (r.subcommand + ".json")).string()
            << "\n";
  return ok ? kOk : kToleranceBreach;
}

std::string field_csv(const ScalarField& f) {
  std::string s = "node,value\n";
  for (int j = 0; j < f.size(); ++j) s += std::to_string(j) + "," + io::format_number(f[j]) + "\n";
  return s;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string s;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) s += (j ? "," : "") + io::format_number(m(i, j));
    s += "\n";
  }
  return s;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

bool is_uniform(const json& spec) { return spec.value("family", "") == "uniform"; }

// ---------------------------------------------------------------------------

int cmd_metric(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const Density mu = build_density(c.doc["density"], grid, c.base_dir);
  const GramMatrix g = metric_gram(mu, c.N());
  Report r{"metric"};
  r.check("symmetry", (g.entries - g.entries.transpose()).cwiseAbs().maxCoeff(), c, "gram_symmetry");
  if (is_uniform(c.doc["density"])) {
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(g.entries.rows(), g.entries.cols());
    for (int i = 0; i < expected.rows(); ++i) expected(i, i) = std::pow(basis_index(i).mode, 2);
    r.check("vol_diagonal_error", (g.entries - expected).cwiseAbs().maxCoeff(), c, "gram_vol_diagonal");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g.entries);
  r.results = {{"N", c.N()},
               {"ordering", basis_ordering(c.N())},
               {"condition", g.condition},
               {"ill_conditioned", g.ill_conditioned()},
               {"min_eigenvalue", eig.eigenvalues().minCoeff()},
               {"base_density_hash", io::hash_hex(density_hash(mu))}};
  write_artifact(c, r, "metric_gram.csv", matrix_csv(g.entries));
  write_artifact(c, r, "metric_density.csv", io::density_csv(mu));
  return finish(c, r);
}

int cmd_bracket(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const WeightedOperatorContext ctx(build_density(c.doc["density"], grid, c.base_dir), c.N());
  const ScalarField a = build_potential(c.doc["potential"], grid, c.N());
  const ScalarField b = build_potential(c.doc["second_potential"], grid, c.N());
  const TangentVector ab = lie_bracket(a, b, ctx);
  const Eigen::VectorXd ba = lie_bracket(b, a, ctx).coeffs();
  const Eigen::VectorXd pos = lie_bracket_divergence_form(a, b, ctx, LaplacianSign::Positive).coeffs();
  const Eigen::VectorXd neg = lie_bracket_divergence_form(a, b, ctx, LaplacianSign::Negative).coeffs();
  Report r{"bracket"};
  r.check("antisymmetry", max_abs(ab.coeffs() + ba), c, "bracket_antisymmetry");
  r.check("projection_vs_divergence_form", max_abs(ab.coeffs() - pos), c, "bracket_forms");
  r.check("sign_invariance", max_abs(pos - neg), c, "bracket_sign");
  r.results = {{"bracket", io::tangent_json(ab)}, {"otto_norm", std::sqrt(otto_inner(ab, ab))}};
  write_artifact(c, r, "bracket_vector.json", io::dump(io::tangent_json(ab)));
  write_artifact(c, r, "bracket_potential.csv", field_csv(ab.potential()));
  return finish(c, r);
}

int cmd_christoffel(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const WeightedOperatorContext ctx(build_density(c.doc["density"], grid, c.base_dir), c.N());
  const ChristoffelTensor gamma = christoffel(ctx);
  const int m = gamma.dim();
  double consistency = 0.0;
  std::string csv = "k,i,j,value\n";
  for (int i = 0; i < m; ++i) {
    const ScalarField pi = basis(basis_index(i).mode, basis_index(i).parity, grid);
    for (int j = 0; j < m; ++j) {
      const ScalarField pj = basis(basis_index(j).mode, basis_index(j).parity, grid);
      const Eigen::VectorXd cd = covariant_derivative(pi, pj, ctx).coeffs();
      for (int k = 0; k < m; ++k) consistency = std::max(consistency, std::abs(cd[k] - gamma(k, i, j)));
    }
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        csv += std::to_string(k) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
               io::format_number(gamma(k, i, j)) + "\n";
  Report r{"christoffel"};
  r.check("solve_residual", gamma.solve_residual(), c, "christoffel_solve");
  r.check("covariant_derivative_consistency", consistency, c, "christoffel_consistency");
  r.results = {{"N", c.N()},
               {"lower_index_asymmetry", gamma.lower_index_asymmetry()},
               {"base_density_hash", io::hash_hex(density_hash(ctx.mu()))}};
  write_artifact(c, r, "christoffel.json", io::dump(io::christoffel_json(gamma)));
  write_artifact(c, r, "christoffel.csv", csv);
  return finish(c, r);
}

int cmd_geodesic(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const Density mu0 = build_density(c.doc["density"], grid, c.base_dir);
  const ScalarField psi0 = build_potential(c.doc["potential"], grid, c.N());
  const std::vector<double> times = uniform_times(c.doc["time_samples"].get<int>());

  GeodesicPath hj = geodesic_hj(mu0, psi0, times);
  GeodesicPath ch = geodesic_christoffel(mu0, basis_coefficients(psi0, c.N()), times);
  GeodesicPath dp = displacement_path(mu0, psi0, times);
  hj.truncation = c.N();

  const double gap = std::max({max_density_gap(hj, ch), max_density_gap(hj, dp), max_density_gap(ch, dp)});
  const double cont = std::max({continuity_residual(hj), continuity_residual(ch), continuity_residual(dp)});
  const double w2 = w2_circle_exact(hj.densities.front(), hj.densities.back()).w2;
  const double act = action(hj);
  const ConstantSpeedReport speed =
      constant_speed_report(hj, [](const Density& a, const Density& b) { return w2_circle_exact(a, b).w2; });

  Report r{"geodesic"};
  r.check("route_agreement", gap, c, "route_agreement");
  r.check("continuity_residual", cont, c, "continuity");
  r.check("action_minus_w2_squared", std::abs(act - w2 * w2), c, "action");
  r.check("constant_speed_deviation", speed.max_abs_deviation, c, "constant_speed");
  r.results = {{"caustic_time", std::isfinite(caustic_time(psi0)) ? json(caustic_time(psi0)) : json("inf")},
               {"w2_endpoints", w2},
               {"action", act},
               {"speed_reference", speed.reference},
               {"speed_max_relative_deviation", speed.max_rel_deviation},
               {"route_gaps",
                {{"hj_christoffel", max_density_gap(hj, ch)},
                 {"hj_displacement", max_density_gap(hj, dp)},
                 {"christoffel_displacement", max_density_gap(ch, dp)}}}};
  for (const GeodesicPath* p : {&hj, &ch, &dp}) {
    const std::string stem = "geodesic_" + p->route;
    write_artifact(c, r, stem + ".csv", io::path_csv(*p));
    write_artifact(c, r, stem + ".manifest.json", io::dump(io::path_manifest(*p, stem + ".csv")));
  }
  std::string speed_csv = "s,t,ratio\n";
  for (const auto& s : speed.samples)
    speed_csv += io::format_number(s.s) + "," + io::format_number(s.t) + "," + io::format_number(s.ratio) + "\n";
  write_artifact(c, r, "geodesic_speed.csv", speed_csv);
  std::string action_csv = "time,speed_squared\n";
  const std::vector<double> integrand = action_integrand(hj);
  for (std::size_t i = 0; i < integrand.size(); ++i)
    action_csv += io::format_number(hj.times[i]) + "," + io::format_number(integrand[i]) + "\n";
  write_artifact(c, r, "geodesic_action.csv", action_csv);
  return finish(c, r);
}

int cmd_transport(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const Density mu0 = build_density(c.doc["density"], grid, c.base_dir);
  const ScalarField psi0 = build_potential(c.doc["potential"], grid, c.N());
  const ScalarField eta = build_potential(c.doc["transport_vector"], grid, c.N());
  GeodesicPath path = geodesic_hj(mu0, psi0, uniform_times(c.doc["time_samples"].get<int>()));
  path.truncation = c.N();

  const TangentVector eta0(mu0, basis_coefficients(eta, c.N()));
  const std::vector<TangentVector> moved = parallel_transport(eta0, path);
  const double n0 = std::sqrt(otto_inner(eta0, eta0));
  double drift = 0.0;
  std::string csv = "time,otto_norm";
  for (const auto& label : basis_ordering(c.N())) csv += "," + label;
  csv += "\n";
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const double norm = std::sqrt(otto_inner(moved[i], moved[i]));
    drift = std::max(drift, std::abs(norm - n0));
    csv += io::format_number(path.times[i]) + "," + io::format_number(norm);
    for (int k = 0; k < moved[i].coeffs().size(); ++k) csv += "," + io::format_number(moved[i].coeffs()[k]);
    csv += "\n";
  }

  const TangentVector v0(mu0, basis_coefficients(path.potentials.front(), c.N()));
  const std::vector<TangentVector> vel = parallel_transport(v0, path);
  double self = 0.0;
  for (std::size_t i = 0; i < vel.size(); ++i) {
    const TangentVector d(path.densities[i], vel[i].coeffs() - basis_coefficients(path.potentials[i], c.N()));
    self = std::max(self, std::sqrt(otto_inner(d, d)));
  }
  Report r{"transport"};
  r.check("norm_drift", drift, c, "transport_norm_drift");
  r.check("self_parallel_error", self, c, "transport_self_parallel");
  r.results = {{"initial", io::tangent_json(eta0)}, {"final", io::tangent_json(moved.back())}, {"initial_norm", n0}};
  write_artifact(c, r, "transport.csv", csv);
  return finish(c, r);
}

int cmd_curvature(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const Density mu = build_density(c.doc["density"], grid, c.base_dir);
  const int frame_modes = std::min(2, c.N());
  const int frame = basis_size(frame_modes);
  const WeightedOperatorContext ctx(mu, std::max(c.N(), 2 * frame_modes));
  std::vector<ScalarField> phi;
  for (int i = 0; i < frame; ++i) phi.push_back(basis(basis_index(i).mode, basis_index(i).parity, grid));

  std::vector<double> table(frame * frame * frame * frame);
  auto at = [&](int a, int b, int d, int e) -> double& { return table[((a * frame + b) * frame + d) * frame + e]; };
  std::string tensor_csv = "i,j,k,l,value\n";
  for (int a = 0; a < frame; ++a)
    for (int b = 0; b < frame; ++b)
      for (int d = 0; d < frame; ++d)
        for (int e = 0; e < frame; ++e) {
          at(a, b, d, e) = riemann(phi[a], phi[b], phi[d], phi[e], ctx);
          tensor_csv += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d) + "," +
                        std::to_string(e) + "," + io::format_number(at(a, b, d, e)) + "\n";
        }
  double sym = 0.0;
  for (int a = 0; a < frame; ++a)
    for (int b = 0; b < frame; ++b)
      for (int d = 0; d < frame; ++d)
        for (int e = 0; e < frame; ++e) {
          const double v = at(a, b, d, e);
          sym = std::max({sym, std::abs(v + at(b, a, d, e)), std::abs(v + at(a, b, e, d)), std::abs(v - at(d, e, a, b)),
                          std::abs(v + at(b, d, a, e) + at(d, a, b, e))});
        }

  std::string sectional_csv = "i,j,value\n";
  double lowest = std::numeric_limits<double>::infinity();
  for (int a = 0; a < frame; ++a)
    for (int b = a + 1; b < frame; ++b) {
      const double k = sectional(phi[a], phi[b], ctx);
      lowest = std::min(lowest, k);
      sectional_csv += std::to_string(a) + "," + std::to_string(b) + "," + io::format_number(k) + "\n";
    }
  const double k_cs = sectional(phi[0], phi[1], ctx);

  const double h = c.doc["fd_step"].get<double>();
  const int fd_n = c.doc["fd_truncation"].get<int>();
  std::string fd_csv = "k,l,j,m,finite_difference,theorem,abs_error,rel_error\n";
  double fd_rel = 0.0;
  bool warned = false;
  for (int a = 0; a < frame; ++a)
    for (int b = 0; b < frame; ++b)
      for (int d = 0; d < frame; ++d)
        for (int e = 0; e < frame; ++e) {
          const FdCurvature f = riemann_fd_oracle(a, b, d, e, mu, fd_n, h);
          warned = warned || f.cancellation_warning;
          if (std::abs(f.theorem) > 1e-8) fd_rel = std::max(fd_rel, f.rel_error);
          fd_csv += std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d) + "," + std::to_string(e) + "," +
                    io::format_number(f.finite_difference) + "," + io::format_number(f.theorem) + "," +
                    io::format_number(f.abs_error) + "," + io::format_number(f.rel_error) + "\n";
        }
  if (warned) std::cerr << "warning: fd_step below 1e-4, finite differences lose digits to cancellation\n";

  Report r{"curvature"};
  if (is_uniform(c.doc["density"])) r.check("sectional_cos1_sin1_minus_3", std::abs(k_cs - 3.0), c, "sectional_vol");
  r.check("symmetry_and_bianchi", sym, c, "curvature_symmetry");
  r.check("negated_min_sectional", -lowest, c, "sectional_nonnegative");
  r.check("fd_oracle_rel_error", fd_rel, c, "fd_relative");
  r.results = {{"sectional_cos1_sin1", k_cs},
               {"min_sectional", lowest},
               {"frame", basis_ordering(frame_modes)},
               {"fd_step", h},
               {"fd_cancellation_warning", warned}};
  write_artifact(c, r, "curvature_tensor.csv", tensor_csv);
  write_artifact(c, r, "curvature_sectional.csv", sectional_csv);
  write_artifact(c, r, "curvature_fd.csv", fd_csv);
  return finish(c, r);
}

int cmd_distance(const RunConfig& c) {
  const GridSpec grid = make_grid(c.n());
  const Density mu = build_density(c.doc["density"], grid, c.base_dir);
  const Density nu = build_density(c.doc["target_density"], grid, c.base_dir);
  const int atoms = c.doc["atoms"].get<int>();
  const TransportResult exact = w2_circle_exact(mu, nu);
  const TransportResult lp = w2_lp(mu, nu, atoms);
  const CouplingReport cr = coupling_check(*lp.coupling);
  const double product = coupling_cost(product_coupling(lp.coupling->source, lp.coupling->target));

  Report r{"distance"};
  r.check("coupling_marginal_violation", cr.max_marginal_violation, c, "coupling_marginal");
  if (exact.w2 > 0.0) r.check("lp_vs_exact_rel_error", std::abs(lp.w2 - exact.w2) / exact.w2, c, "lp_relative");
  r.results = {{"w2_exact", exact.w2},
               {"cut_shift", *exact.shift},
               {"w2_lp", lp.w2},
               {"atoms", atoms},
               {"coupling_negative_entries", cr.negative_entries},
               {"product_coupling_cost", product},
               {"lp_cost_not_above_product", lp.w2 * lp.w2 <= product + 1e-15}};
  write_artifact(c, r, "distance_coupling.csv", io::coupling_csv(*lp.coupling));
  return finish(c, r);
}

int cmd_validate(const RunConfig& c) {
  AcceptanceConfig a;
  a.n = c.n();
  a.truncation = c.N();
  a.seed = c.seed();
  const std::vector<CriterionResult> results = run_acceptance(a);
  json criteria = json::array();
  std::string csv = "id,title,check,measured,relation,tolerance,pass\n";
  bool ok = true;
  for (const auto& res : results) {
    std::cout << summary_line(res) << "\n";
    ok = ok && res.pass();
    criteria.push_back({{"id", res.id}, {"title", res.title}, {"pass", res.pass()},
                        {"checks", checks_json(res.checks)}, {"notes", res.notes}});
    for (const auto& k : res.checks)
      csv += std::to_string(res.id) + "," + res.title + "," + k.name + "," + io::format_number(k.measured) + "," +
             k.symbol() + "," + io::format_number(k.tolerance) + "," + (k.pass() ? "true" : "false") + "\n";
  }
  json tolerances = json::object();
  for (const auto& res : results)
    for (const auto& k : res.checks) tolerances[std::to_string(res.id) + "." + k.name] = k.tolerance;
  const json report = {{"schema_version", io::kSchemaVersion},
                       {"subcommand", "validate"},
                       {"config_hash", c.hash()},
                       {"config", c.doc},
                       {"tolerances", tolerances},
                       {"criteria", criteria},
                       {"artifacts", {"validate.csv", "validate.json"}},
                       {"status", ok ? "ok" : "tolerance_breach"}};
  io::write_text(c.out / "validate.csv", csv);
  io::write_text(c.out / "validate.json", io::dump(report));
  return ok ? kOk : kToleranceBreach;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Otto-Wasserstein geometry on the circle: metric, connection, geodesics, curvature and OT oracles"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int n = 0, N = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized sweeps");
  auto* n_opt = app.add_option("--n", n, "grid size override");
  auto* N_opt = app.add_option("--N", N, "truncation override");
  const std::map<std::string, std::string> subcommands = {
      {"metric", "Gram matrix of the Otto metric in the trigonometric frame"},
      {"bracket", "Lie bracket of two constant fields by both formulas"},
      {"christoffel", "Christoffel symbols with a header for reuse"},
      {"geodesic", "three geodesic routes and their cross-checks"},
      {"transport", "parallel transport along the geodesic"},
      {"curvature", "curvature table, sectional samples and finite-difference oracle"},
      {"distance", "exact circular W2 and the transportation LP"},
      {"validate", "full acceptance suite"}};
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    RunConfig c{default_config(), fs::current_path(), out_dir};
    if (!config_path.empty()) {
      const fs::path p(config_path);
      if (!fs::exists(p)) throw ConfigError("config file not found: " + config_path);
      json user;
      try {
        user = json::parse(io::read_text(p));
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      merge_config(c.doc, user);
      c.base_dir = p.has_parent_path() ? p.parent_path() : fs::current_path();
    }
    if (*n_opt) c.doc["n"] = n;
    if (*N_opt) c.doc["N"] = N;
    if (*seed_opt) c.doc["seed"] = seed;
    check_config(c);

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "metric") return cmd_metric(c);
    if (sub == "bracket") return cmd_bracket(c);
    if (sub == "christoffel") return cmd_christoffel(c);
    if (sub == "geodesic") return cmd_geodesic(c);
    if (sub == "transport") return cmd_transport(c);
    if (sub == "curvature") return cmd_curvature(c);
    if (sub == "distance") return cmd_distance(c);
    return cmd_validate(c);
  } catch (const CausticError& e) {
    std::cerr << "error: " << e.what() << " (crossing time " << e.crossing_time() << ")\n";
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace wgeom::cli
