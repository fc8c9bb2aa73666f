#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace fneumann {

using Complex = std::complex<double>;

// Base class so that callers can catch every numerical failure in one place.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleAt : public NumericalError {
 public:
  explicit PoleAt(Complex where, const std::string& what_fn = "")
      : NumericalError(what_fn + ": pole at (" + std::to_string(where.real()) + ", " +
                       std::to_string(where.imag()) + ")"),
        where_(where) {}
  Complex where() const { return where_; }

 private:
  Complex where_;
};

class QuadratureNotConverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentStrip : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroOnBoundary : public NumericalError {
 public:
  ZeroOnBoundary(Complex where, double modulus)
      : NumericalError("zero on boundary near (" + std::to_string(where.real()) + ", " +
                       std::to_string(where.imag()) + ")"),
        where_(where),
        modulus_(modulus) {}
  Complex where() const { return where_; }
  double modulus() const { return modulus_; }

 private:
  Complex where_;
  double modulus_;
};

class SubdivisionBudgetExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoZeroFound : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NewtonDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientResolution : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace fneumann
