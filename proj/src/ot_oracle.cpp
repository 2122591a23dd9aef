#include "wgeom/ot_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "wgeom/errors.hpp"

namespace wgeom {

double circle_distance(double x, double y) {
  double d = std::fmod(std::abs(x - y), kTwoPi);
  return std::min(d, kTwoPi - d);
}

// ---------------------------------------------------------------------------
// Circular reduction

namespace {

// Quantile function of mu at s in [0, 1): F^{-1}(s) in [0, 2pi].
double quantile(const TrigInterpolant& cdf, const TrigInterpolant& rho, double s) {
  double lo = 0.0, hi = kTwoPi;
  double x = kTwoPi * s;
  for (int it = 0; it < 200; ++it) {
    const double f = cdf.antiderivative(x) - s;
    if (f > 0.0) hi = x; else lo = x;
    const double df = rho.value(x) / kTwoPi;
    double next = df > 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15) return next;
    x = next;
  }
  return x;
}

// Lifted quantile s -> F^{-1}(s mod 1) + 2 pi floor(s), as a monotone cubic
// Hermite interpolant of exact knot values with slopes 2 pi / rho(F^{-1}(s))
// limited by the Fritsch-Carlson bound, so steep tails cannot overshoot.
class QuantileTable {
 public:
  QuantileTable(const Density& mu, int knots) : k_(knots), q_(knots + 1), dq_(knots + 1) {
    const TrigInterpolant cdf(mu.rho());
    const TrigInterpolant rho(mu.rho());
    for (int i = 0; i < k_; ++i) q_[i] = quantile(cdf, rho, double(i) / k_);
    q_[k_] = q_[0] + kTwoPi;
    for (int i = 0; i <= k_; ++i) dq_[i] = kTwoPi / rho.value(q_[i]) / k_;  // per unit cell
    for (int i = 0; i <= k_; ++i) {
      const double left = i > 0 ? q_[i] - q_[i - 1] : q_[k_] - q_[k_ - 1];
      const double right = i < k_ ? q_[i + 1] - q_[i] : q_[1] - q_[0];
      dq_[i] = std::min(dq_[i], 3.0 * std::min(left, right));
    }
  }

  double operator()(double s) const {
    const double turns = std::floor(s);
    const double u = (s - turns) * k_;
    const int i = std::min(static_cast<int>(u), k_ - 1);
    const double t = u - i;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * q_[i] + h10 * dq_[i] + h01 * q_[i + 1] + h11 * dq_[i + 1] + kTwoPi * turns;
  }

 private:
  int k_;
  std::vector<double> q_;
  std::vector<double> dq_;
};

}  // namespace

Atoms discretize(const Density& mu, int m) {
  if (m < 1) throw ConfigError("atom count must be positive");
  // 8-point Gauss-Legendre rule on [-1, 1], symmetric half.
  static constexpr double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                   0.9602898564975363};
  static constexpr double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                   0.1012285362903763};
  const TrigInterpolant cdf(mu.rho());
  const TrigInterpolant rho(mu.rho());
  std::vector<double> edges(m + 1);
  for (int i = 0; i <= m; ++i) edges[i] = i == m ? kTwoPi : quantile(cdf, rho, double(i) / m);
  Atoms a;
  a.positions.resize(m);
  a.weights.assign(m, 1.0 / m);
  for (int i = 0; i < m; ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    const double half = 0.5 * (edges[i + 1] - edges[i]);
    double mass = 0.0, moment = 0.0;
    for (int q = 0; q < 4; ++q) {
      for (double sgn : {-1.0, 1.0}) {
        const double x = mid + sgn * half * gx[q];
        const double w = gw[q] * rho.value(x);
        mass += w;
        moment += w * x;
      }
    }
    a.positions[i] = moment / mass;
  }
  return a;
}

TransportResult w2_circle_exact(const Density& mu, const Density& nu, int samples) {
  if (samples < 16) throw ConfigError("need at least 16 quantile samples");
  // W2^2 = min over theta of integral_0^1 (F^{-1}(s) - G^{-1}(s + theta))^2 ds, midpoint rule in s.
  const TrigInterpolant cdf(mu.rho());
  const TrigInterpolant rho(mu.rho());
  std::vector<double> mids(samples), a(samples);
  for (int m = 0; m < samples; ++m) {
    mids[m] = (m + 0.5) / samples;
    a[m] = quantile(cdf, rho, mids[m]);
  }
  const QuantileTable b(nu, samples);

  auto cost = [&](double theta) {
    double s = 0.0;
    for (int m = 0; m < samples; ++m) {
      const double d = a[m] - b(mids[m] + theta);
      s += d * d;
    }
    return s / samples;
  };

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = cost(x1), f2 = cost(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = cost(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = cost(x2);
    }
  }
  const double theta = 0.5 * (lo + hi);
  TransportResult r;
  r.w2 = std::sqrt(std::max(0.0, cost(theta)));
  r.shift = theta;
  return r;
}

// ---------------------------------------------------------------------------
// Transportation simplex

namespace {

struct Cell {
  int i;
  int j;
  double flow;
};

class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand, Eigen::MatrixXd cost)
      : a_(std::move(supply)), b_(std::move(demand)), c_(std::move(cost)),
        rows_(static_cast<int>(a_.size())), cols_(static_cast<int>(b_.size())) {}

  Eigen::MatrixXd solve() {
    north_west_corner();
    const double scale = std::max(1.0, c_.cwiseAbs().maxCoeff());
    const double eps = 1e-12 * scale;
    const int stall_limit = 2 * (rows_ + cols_);
    int degenerate_streak = 0;
    bool bland = false;
    const long max_iter = 50L * rows_ * cols_ + 1000;
    for (long it = 0; it < max_iter; ++it) {
      compute_duals();
      int ei = -1, ej = -1;
      double best = -eps;
      for (int i = 0; i < rows_ && !(bland && ei >= 0); ++i) {
        for (int j = 0; j < cols_; ++j) {
          const double r = c_(i, j) - u_[i] - v_[j];
          if (r < best) {
            best = bland ? -eps : r;
            ei = i;
            ej = j;
            if (bland) break;
          }
        }
      }
      if (ei < 0) return flows();
      const double step = pivot(ei, ej, bland);
      if (step <= 0.0) {
        if (++degenerate_streak > stall_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
    throw NumericalError("transportation simplex did not converge");
  }

 private:
  void north_west_corner() {
    std::vector<double> ra = a_, rb = b_;
    int i = 0, j = 0;
    while (true) {
      const double q = std::min(ra[i], rb[j]);
      basis_.push_back({i, j, std::max(0.0, q)});
      ra[i] -= q;
      rb[j] -= q;
      if (i == rows_ - 1 && j == cols_ - 1) break;
      if (j == cols_ - 1 || (i < rows_ - 1 && ra[i] <= rb[j])) ++i;
      else ++j;
    }
  }

  // Node ids: rows 0..rows-1, columns rows..rows+cols-1. adj holds basis indices.
  void build_adjacency() {
    adj_.assign(rows_ + cols_, {});
    for (int e = 0; e < static_cast<int>(basis_.size()); ++e) {
      adj_[basis_[e].i].push_back(e);
      adj_[rows_ + basis_[e].j].push_back(e);
    }
  }

  int other_end(int e, int node) const {
    return node < rows_ ? rows_ + basis_[e].j : basis_[e].i;
  }

  void compute_duals() {
    build_adjacency();
    u_.assign(rows_, 0.0);
    v_.assign(cols_, 0.0);
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int e : adj_[node]) {
        const int next = other_end(e, node);
        if (seen[next]) continue;
        seen[next] = 1;
        const Cell& c = basis_[e];
        if (next < rows_) u_[c.i] = c_(c.i, c.j) - v_[c.j];
        else v_[c.j] = c_(c.i, c.j) - u_[c.i];
        stack.push_back(next);
      }
    }
  }

  // Enters cell (ei, ej), returns the pivot step.
  double pivot(int ei, int ej, bool bland) {
    // Tree path from column ej to row ei.
    const int start = rows_ + ej, goal = ei;
    std::vector<int> via(rows_ + cols_, -1);
    std::vector<char> seen(rows_ + cols_, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty() && !seen[goal]) {
      const int node = stack.back();
      stack.pop_back();
      for (int e : adj_[node]) {
        const int next = other_end(e, node);
        if (seen[next]) continue;
        seen[next] = 1;
        via[next] = e;
        stack.push_back(next);
      }
    }
    std::vector<int> path;  // edges from the goal back to the start
    for (int node = goal; node != start;) {
      const int e = via[node];
      path.push_back(e);
      node = other_end(e, node);
    }
    std::reverse(path.begin(), path.end());  // edge 0 touches column ej

    // Edges at even positions lose flow.
    double step = std::numeric_limits<double>::infinity();
    int leave = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Cell& c = basis_[path[p]];
      const bool better = c.flow < step ||
          (c.flow == step && bland &&
           c.i * cols_ + c.j < basis_[leave].i * cols_ + basis_[leave].j);
      if (better) {
        step = c.flow;
        leave = path[p];
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      basis_[path[p]].flow += (p % 2 == 0 ? -step : step);
    }
    basis_[leave] = {ei, ej, step};
    return step;
  }

  Eigen::MatrixXd flows() const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const Cell& c : basis_) x(c.i, c.j) += std::max(0.0, c.flow);
    return x;
  }

  std::vector<double> a_, b_;
  Eigen::MatrixXd c_;
  int rows_, cols_;
  std::vector<Cell> basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
};

void check_atoms(const Atoms& a, const char* what) {
  if (a.positions.empty() || a.positions.size() != a.weights.size())
    throw ShapeError(std::string(what) + " atoms need matching nonempty positions and weights");
  for (double w : a.weights)
    if (!(w >= 0.0)) throw DomainError(std::string(what) + " atom weights must be nonnegative");
}

}  // namespace

double coupling_cost(const Coupling& pi) {
  double s = 0.0;
  for (int i = 0; i < pi.matrix.rows(); ++i)
    for (int j = 0; j < pi.matrix.cols(); ++j) {
      const double d = circle_distance(pi.source.positions[i], pi.target.positions[j]);
      s += pi.matrix(i, j) * d * d;
    }
  return s;
}

TransportResult solve_transport(const Atoms& source, const Atoms& target) {
  check_atoms(source, "source");
  check_atoms(target, "target");
  const double ma = std::accumulate(source.weights.begin(), source.weights.end(), 0.0);
  const double mb = std::accumulate(target.weights.begin(), target.weights.end(), 0.0);
  if (std::abs(ma - mb) > 1e-9)
    throw DomainError("transport marginals have unequal mass " + std::to_string(ma) + " and " +
                      std::to_string(mb));
  const int r = static_cast<int>(source.weights.size());
  const int c = static_cast<int>(target.weights.size());
  Eigen::MatrixXd cost(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      const double d = circle_distance(source.positions[i], target.positions[j]);
      cost(i, j) = d * d;
    }
  // Absorb the roundoff-level mass mismatch into the largest demand.
  std::vector<double> demand = target.weights;
  *std::max_element(demand.begin(), demand.end()) += ma - mb;

  TransportSimplex simplex(source.weights, demand, cost);
  Coupling pi{simplex.solve(), source, target};
  TransportResult res;
  res.w2 = std::sqrt(std::max(0.0, coupling_cost(pi)));
  res.coupling = std::move(pi);
  return res;
}

TransportResult w2_lp(const Density& mu, const Density& nu, int m) {
  if (m < 2 || m > 256) throw DomainError("w2_lp atom count must be in 2..256, got " + std::to_string(m));
  if (!(mu.grid() == nu.grid())) throw ShapeError("densities live on different grids");
  return solve_transport(discretize(mu, m), discretize(nu, m));
}

CouplingReport coupling_check(const Coupling& pi) {
  CouplingReport r;
  const auto& x = pi.matrix;
  if (x.rows() != static_cast<Eigen::Index>(pi.source.weights.size()) ||
      x.cols() != static_cast<Eigen::Index>(pi.target.weights.size()))
    throw ShapeError("coupling matrix does not match its marginals");
  r.min_entry = x.size() ? x.minCoeff() : 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x.data()[i] < 0.0) ++r.negative_entries;
  for (int i = 0; i < x.rows(); ++i)
    r.max_marginal_violation = std::max(r.max_marginal_violation, std::abs(x.row(i).sum() - pi.source.weights[i]));
  for (int j = 0; j < x.cols(); ++j)
    r.max_marginal_violation = std::max(r.max_marginal_violation, std::abs(x.col(j).sum() - pi.target.weights[j]));
  return r;
}

Coupling product_coupling(const Atoms& source, const Atoms& target) {
  const Eigen::Map<const Eigen::VectorXd> a(source.weights.data(), source.weights.size());
  const Eigen::Map<const Eigen::VectorXd> b(target.weights.data(), target.weights.size());
  return Coupling{a * b.transpose(), source, target};
}

}  // namespace wgeom
