#include "wgeom/circle_grid.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "wgeom/errors.hpp"

namespace wgeom {

namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(out.data());
    forward_ = fftw_plan_dft_r2c_1d(n, in.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_1d(n, c, in.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> x) const {
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n_ / 2 + 1);
    fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }

  // c2r destroys its input, so the spectrum is taken by value.
  std::vector<double> backward(std::vector<std::complex<double>> spec) const {
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
    for (double& v : out) v /= n_;
    return out;
  }

 private:
  int n_;
  fftw_plan forward_;
  fftw_plan backward_;
};

const FftPlans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlans>(n);
  return *slot;
}

std::vector<double> spectral_derivative(std::span<const double> values, int order) {
  if (order != 1 && order != 2) throw ConfigError("derivative order must be 1 or 2");
  const int n = static_cast<int>(values.size());
  const auto& plans = plans_for(n);
  auto spec = plans.forward(values);
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k <= n / 2; ++k) {
    if (k == n / 2) {
      // Nyquist: odd derivatives of the real interpolant vanish there.
      spec[k] = order == 1 ? 0.0 : spec[k] * (-double(k) * k);
      continue;
    }
    std::complex<double> factor = std::pow(i * double(k), order);
    spec[k] *= factor;
  }
  return plans.backward(std::move(spec));
}

}  // namespace

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

GridSpec make_grid(int n) {
  if (n < 16) throw ConfigError("grid size must be at least 16, got " + std::to_string(n));
  if (n % 2 != 0) throw ConfigError("grid size must be even, got " + std::to_string(n));
  return GridSpec(n);
}

template <class Tag>
GridFunction<Tag>::GridFunction(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size())
    throw ShapeError("grid function has " + std::to_string(values_.size()) +
                     " values for a grid of " + std::to_string(grid_.size()));
}

template <class Tag>
void GridFunction<Tag>::check_same_grid(const GridFunction& other) const {
  if (!(grid_ == other.grid_)) throw ShapeError("grid functions live on different grids");
}

template <class Tag>
GridFunction<Tag>& GridFunction<Tag>::operator+=(const GridFunction& other) {
  check_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

template <class Tag>
GridFunction<Tag>& GridFunction<Tag>::operator-=(const GridFunction& other) {
  check_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

template <class Tag>
GridFunction<Tag>& GridFunction<Tag>::operator*=(const GridFunction& other) {
  check_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= other.values_[j];
  return *this;
}

template <class Tag>
GridFunction<Tag>& GridFunction<Tag>::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

template <class Tag>
double GridFunction<Tag>::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

template class GridFunction<ScalarTag>;
template class GridFunction<OneFormTag>;

OneForm flat(const ScalarField& v) {
  return OneForm(v.grid(), std::vector<double>(v.values().begin(), v.values().end()));
}

ScalarField sharp(const OneForm& w) {
  return ScalarField(w.grid(), std::vector<double>(w.values().begin(), w.values().end()));
}

double integrate(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / f.size();
}

ScalarField deriv(const ScalarField& f, int order) {
  return ScalarField(f.grid(), spectral_derivative(f.values(), order));
}

OneForm deriv(const OneForm& f, int order) {
  return OneForm(f.grid(), spectral_derivative(f.values(), order));
}

ScalarField shifted(const ScalarField& f, double dx) {
  const int n = f.size();
  const auto& plans = plans_for(n);
  auto spec = plans.forward(f.values());
  for (int k = 0; k <= n / 2; ++k) {
    if (k == n / 2) {
      spec[k] *= std::cos(k * dx);
      continue;
    }
    spec[k] *= std::polar(1.0, k * dx);
  }
  return ScalarField(f.grid(), plans.backward(std::move(spec)));
}

// ---------------------------------------------------------------------------

TrigInterpolant::TrigInterpolant(const ScalarField& f) : n_(f.size()) {
  const auto spec = plans_for(n_).forward(f.values());
  const double inv = 1.0 / n_;
  a0_ = spec[0].real() * inv;
  nyquist_ = spec[n_ / 2].real() * inv;
  const int kmax = n_ / 2 - 1;
  a_.resize(kmax);
  b_.resize(kmax);
  for (int k = 1; k <= kmax; ++k) {
    a_[k - 1] = 2.0 * spec[k].real() * inv;
    b_[k - 1] = -2.0 * spec[k].imag() * inv;
  }
}

double TrigInterpolant::value(double x) const {
  const std::complex<double> step(std::cos(x), std::sin(x));
  std::complex<double> z = step;
  double s = a0_;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    s += a_[k] * z.real() + b_[k] * z.imag();
    z *= step;
  }
  return s + nyquist_ * std::cos(0.5 * n_ * x);
}

double TrigInterpolant::d1(double x) const {
  const std::complex<double> step(std::cos(x), std::sin(x));
  std::complex<double> z = step;
  double s = 0.0;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double kk = double(k + 1);
    s += kk * (b_[k] * z.real() - a_[k] * z.imag());
    z *= step;
  }
  return s;
}

double TrigInterpolant::d2(double x) const {
  const std::complex<double> step(std::cos(x), std::sin(x));
  std::complex<double> z = step;
  double s = 0.0;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double kk = double(k + 1);
    s -= kk * kk * (a_[k] * z.real() + b_[k] * z.imag());
    z *= step;
  }
  const double h = 0.5 * n_;
  return s - h * h * nyquist_ * std::cos(h * x);
}

double TrigInterpolant::antiderivative(double x) const {
  const std::complex<double> step(std::cos(x), std::sin(x));
  std::complex<double> z = step;
  double s = a0_ * x;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    const double kk = double(k + 1);
    s += (a_[k] * z.imag() - b_[k] * (z.real() - 1.0)) / kk;
    z *= step;
  }
  const double h = 0.5 * n_;
  s += nyquist_ * std::sin(h * x) / h;
  return s / kTwoPi;
}

// ---------------------------------------------------------------------------

std::string basis_label(int i) {
  const auto [k, p] = basis_index(i);
  return (p == Parity::Cos ? "cos" : "sin") + std::to_string(k);
}

std::vector<std::string> basis_ordering(int truncation) {
  std::vector<std::string> out;
  for (int i = 0; i < basis_size(truncation); ++i) out.push_back(basis_label(i));
  return out;
}

ScalarField basis(int k, Parity parity, const GridSpec& grid) {
  if (k < 1 || k > grid.max_mode())
    throw AliasingError("basis mode " + std::to_string(k) + " outside 1.." +
                        std::to_string(grid.max_mode()) + " for n=" + std::to_string(grid.size()));
  return sample(grid, [&](double x) {
    return std::numbers::sqrt2 * (parity == Parity::Cos ? std::cos(k * x) : std::sin(k * x));
  });
}

BasisTable::BasisTable(const GridSpec& g, int trunc)
    : grid(g), truncation(trunc) {
  if (trunc < 1) throw ConfigError("truncation must be at least 1");
  if (trunc > g.max_mode())
    throw AliasingError("truncation " + std::to_string(trunc) + " exceeds Nyquist for n=" +
                        std::to_string(g.size()));
  const int n = g.size();
  const int m = basis_size(trunc);
  phi.resize(n, m);
  d1.resize(n, m);
  d2.resize(n, m);
  const double r2 = std::numbers::sqrt2;
  for (int i = 0; i < m; ++i) {
    const auto [k, p] = basis_index(i);
    for (int j = 0; j < n; ++j) {
      const double c = std::cos(k * g.node(j));
      const double s = std::sin(k * g.node(j));
      if (p == Parity::Cos) {
        phi(j, i) = r2 * c;
        d1(j, i) = -r2 * k * s;
        d2(j, i) = -r2 * k * k * c;
      } else {
        phi(j, i) = r2 * s;
        d1(j, i) = r2 * k * c;
        d2(j, i) = -r2 * k * k * s;
      }
    }
  }
}

ScalarField synthesize(const GridSpec& grid, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() % 2 != 0) throw ShapeError("basis coefficient vector must have even length");
  const BasisTable table(grid, static_cast<int>(coeffs.size() / 2));
  const Eigen::VectorXd v = table.phi * coeffs;
  return ScalarField(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd basis_coefficients(const ScalarField& f, int truncation) {
  const BasisTable table(f.grid(), truncation);
  const Eigen::Map<const Eigen::VectorXd> v(f.values().data(), f.size());
  return table.phi.transpose() * v * f.grid().weight();
}

}  // namespace wgeom
