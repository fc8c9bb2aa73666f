#pragma once

#include <functional>

#include "fneumann/neumann_symbols.hpp"
#include "fneumann/quadrature.hpp"

namespace fneumann {

/// A function on (0, infinity) with two derivatives and a known or estimated
/// power-law tail u(y) ~ tail_amplitude * y^tail_exponent.
struct HalfLineFunction {
  std::function<Complex(double)> value;
  std::function<Complex(double)> first;
  std::function<Complex(double)> second;
  bool has_tail = false;
  Complex tail_exponent{};
  Complex tail_amplitude{};

  static HalfLineFunction power(Complex beta);
};

/// Real test function supplied with its first two derivatives.
struct TestFunction {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;

  TestFunction scaled(double factor) const;
  HalfLineFunction as_half_line() const;
};

/// x^2 (1 + x^2)^(-(3 + 2s)/2): quadratic at the origin, decaying like x^(-1-2s).
TestFunction boundary_bump(const Order& order);

/// The correction k(x, y) = 2s c_s int_0^inf z^2s (x+z)^(-1-2s) (y+z)^(-1-2s) dz.
double kernel_k_correction(const Order& order, double x, double y, const QuadratureSpec& q = {});

/// Full half-line kernel c_s |x - y|^(-1-2s) + k(x, y), x != y.
double kernel_half_line(const Order& order, double x, double y, const QuadratureSpec& q = {});

/// int_0^inf k(x, y) dy by nested quadrature (no closed form used).
Estimate<double> kernel_k_row_integral(const Order& order, double x, const QuadratureSpec& q = {});

/// L u(x) for the half-line Neumann operator by singular quadrature.
Estimate<Complex> apply_L(const Order& order, const HalfLineFunction& u, double x, const QuadratureSpec& q = {});

/// L(y^beta)(x). Accepts -1 < Re beta < 2s + 1 away from beta = 2s; for Re beta >= 2s
/// diverging tails are replaced by their analytic continuation.
Estimate<Complex> apply_L_power(const Order& order, Complex beta, double x, const QuadratureSpec& q = {});

/// L phi(x) for a real test function.
Estimate<double> apply_L_test(const Order& order, const TestFunction& phi, double x, const QuadratureSpec& q = {});

/// (-Delta)^s (y_+^beta)(x) on the line, x > 0.
Estimate<Complex> apply_dirichlet_power(const Order& order, Complex beta, double x, const QuadratureSpec& q = {});

/// Relative defect between int g L phi and int (L g) phi for g = x^(beta-1).
double selfadjoint_check(const Order& order, double beta, const TestFunction& phi, const QuadratureSpec& q = {});

/// Value at x < 0 that makes the nonlocal Neumann condition hold for u given on (0, infinity).
double neumann_extension(const Order& order, const std::function<double(double)>& u, double x,
                         const QuadratureSpec& q = {});

}  // namespace fneumann
