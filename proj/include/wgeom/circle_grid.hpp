#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wgeom {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform periodic grid on the circle of circumference 2*pi. The volume
// measure is normalized, so every node carries quadrature weight 1/n.
class GridSpec {
 public:
  int size() const { return n_; }
  double spacing() const { return kTwoPi / n_; }
  double weight() const { return 1.0 / n_; }
  double node(int j) const { return kTwoPi * j / n_; }
  std::vector<double> nodes() const;

  // Largest basis mode that can be represented without aliasing.
  int max_mode() const { return n_ / 2 - 1; }

  bool operator==(const GridSpec&) const = default;

 private:
  friend GridSpec make_grid(int n);
  explicit GridSpec(int n) : n_(n) {}
  int n_;
};

// Throws ConfigError unless n is even and at least 16.
GridSpec make_grid(int n);

struct ScalarTag {};
struct OneFormTag {};

// Node values of a function (or of the dx-coefficient of a one-form) on a grid.
template <class Tag>
class GridFunction {
 public:
  explicit GridFunction(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}
  GridFunction(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](int j) const { return values_[j]; }
  double& operator[](int j) { return values_[j]; }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(const GridFunction& other);
  GridFunction& operator*=(double s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
  friend GridFunction operator*(GridFunction a, double s) { return a *= s; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend GridFunction operator-(GridFunction a) { return a *= -1.0; }

  double max_abs() const;

 private:
  void check_same_grid(const GridFunction& other) const;

  GridSpec grid_;
  std::vector<double> values_;
};

using ScalarField = GridFunction<ScalarTag>;
using OneForm = GridFunction<OneFormTag>;

extern template class GridFunction<ScalarTag>;
extern template class GridFunction<OneFormTag>;

// In one dimension the musical isomorphisms are the identity on coefficients.
OneForm flat(const ScalarField& vector_coefficient);
ScalarField sharp(const OneForm& form);

// Samples f at the grid nodes.
template <class F>
ScalarField sample(const GridSpec& grid, F&& f) {
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = f(grid.node(j));
  return ScalarField(grid, std::move(v));
}

// Quadrature against the normalized volume: the mean of the node values.
// Exact for trigonometric polynomials of degree below n.
double integrate(const ScalarField& f);

// Spectral derivative of order 1 or 2. Exact on resolved trigonometric
// polynomials; accuracy degrades silently for unresolved fields.
ScalarField deriv(const ScalarField& f, int order = 1);
OneForm deriv(const OneForm& f, int order = 1);

// f(x + dx) for the trigonometric interpolant of f, by a spectral phase shift.
ScalarField shifted(const ScalarField& f, double dx);

// Trigonometric interpolant of a grid function, evaluable anywhere on the circle.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const ScalarField& f);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  // (1/2pi) * integral_0^x f(y) dy: the cumulative mass when f is a density.
  double antiderivative(double x) const;

  double mean() const { return a0_; }

 private:
  int n_;
  double a0_;
  double nyquist_;
  std::vector<double> a_;  // cos coefficients, modes 1..n/2-1
  std::vector<double> b_;  // sin coefficients
};

// ---------------------------------------------------------------------------
// Orthonormal trigonometric basis of L2(vol), constants excluded.
// Index ordering: 0 -> sqrt2 cos x, 1 -> sqrt2 sin x, 2 -> sqrt2 cos 2x, ...

enum class Parity { Cos, Sin };

struct BasisIndex {
  int mode;
  Parity parity;
};

inline int basis_size(int truncation) { return 2 * truncation; }
inline BasisIndex basis_index(int i) { return {i / 2 + 1, i % 2 == 0 ? Parity::Cos : Parity::Sin}; }
inline int basis_position(int mode, Parity p) { return 2 * (mode - 1) + (p == Parity::Sin ? 1 : 0); }
std::string basis_label(int i);
std::vector<std::string> basis_ordering(int truncation);

// sqrt2 cos(kx) or sqrt2 sin(kx) on the grid. Throws AliasingError outside 1..n/2-1.
ScalarField basis(int k, Parity parity, const GridSpec& grid);

// Analytic values and derivatives of the first 2N basis functions on the grid,
// one column per basis function.
struct BasisTable {
  BasisTable(const GridSpec& grid, int truncation);

  GridSpec grid;
  int truncation;
  Eigen::MatrixXd phi;
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
};

// Field with the given basis coefficients; coeffs.size() must be even.
ScalarField synthesize(const GridSpec& grid, const Eigen::VectorXd& coeffs);

// L2(vol) coefficients of f on the first 2N basis functions.
Eigen::VectorXd basis_coefficients(const ScalarField& f, int truncation);

}  // namespace wgeom
