#pragma once

#include <stdexcept>
#include <string>

namespace wgeom {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user configuration (grid size, truncation, config files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Operands live on different grids or have mismatched lengths.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A value left the domain of the operation (e.g. a density that is not positive).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A basis mode at or above the Nyquist limit of the grid.
class AliasingError : public Error {
 public:
  using Error::Error;
};

// Right-hand side of an elliptic solve violates the solvability condition.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// Numerical failures. The CLI maps all of these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A displacement map that is not injective on the circle.
class FoldError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Characteristics of the Hamilton-Jacobi flow cross before the requested time.
class CausticError : public NumericalError {
 public:
  CausticError(const std::string& what, double crossing_time)
      : NumericalError(what), crossing_time_(crossing_time) {}
  double crossing_time() const { return crossing_time_; }

 private:
  double crossing_time_;
};

}  // namespace wgeom
