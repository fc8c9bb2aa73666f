#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fneumann/kernel_quadrature.hpp"
#include "fneumann/neumann_symbols.hpp"
#include "fneumann/quadrature.hpp"

namespace fneumann {

/// Holomorphic profile on the strip |Re z| < strip_half_width decaying at
/// least like (1 + |z|)^(-decay_order) there.
struct TestProfile {
  std::string identifier;
  std::function<Complex(Complex)> evaluator;
  double strip_half_width = 0.0;
  int decay_order = 2;

  Complex operator()(Complex z) const { return evaluator(z); }
  /// l-th derivative from the Cauchy integral on a circle of radius 0.1 (64-node trapezoid rule).
  Complex derivative(Complex z, int l) const;
  TestProfile scaled(double factor) const;
};

/// exp(z^2 - 4). Entire; valid for every decay order.
TestProfile gaussian_profile();

/// int_0^inf x^(z-1) w(x) dx on a logarithmic scale, integrated outwards from x = 1
/// until the contributions die out. Throws DivergentStrip when they do not.
Estimate<Complex> mellin_transform(const std::function<Complex(double)>& w, Complex z, const QuadratureSpec& q = {});

/// (1/2pi) int x^(-c-it) phi(c+it) dt.
Estimate<Complex> inverse_mellin(const TestProfile& phi, double x, double c = 0.5, const QuadratureSpec& q = {});

/// The inverse Mellin transform of a profile sampled on a uniform grid in
/// log x together with its first five log-derivatives, and evaluated by
/// piecewise quintic Hermite interpolation. Zero outside the grid.
class TabulatedInverseMellin {
 public:
  TabulatedInverseMellin(const TestProfile& phi, double c = 0.5, double log_range = 40.0, double step = 0.01,
                         const QuadratureSpec& q = {});

  Complex value(double x) const;
  Complex first(double x) const;
  Complex second(double x) const;
  HalfLineFunction as_half_line() const;

 private:
  // d^k/dL^k v(e^L) at the nodes, k = 0..5
  std::array<std::vector<Complex>, 6> table_;
  double lo_;
  double step_;

  bool locate(double x, std::size_t& i, double& u) const;
  Complex interpolate(int k, std::size_t i, double u) const;
};

/// |int x^alpha (log x)^l M^-1[phi](x) dx - phi^(l)(alpha + 1)| / |phi^(l)(alpha + 1)|,
/// splitting the x-integral at 1 with separate inversion contours on each side.
double dirac_pairing_check(Complex alpha, int l, const TestProfile& phi, const QuadratureSpec& q = {});

/// Relative defect of M[L(M^-1 phi)](z) against f(z - 1) phi(z - 2s).
double mellin_magic_check(const Order& order, const TestProfile& phi, Complex z, const QuadratureSpec& q = {});

struct PlancherelReport {
  Complex x_side;
  Complex line_side;
  double defect;
};

/// Compares int u M^-1[phi] dx with (1/2pi) int M[u](1/2 + it) conj(phi(1/2 + it)) dt.
PlancherelReport plancherel_check(const std::function<double(double)>& u, const TestProfile& phi,
                                  const QuadratureSpec& q = {});

}  // namespace fneumann
