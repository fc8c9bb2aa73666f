#include "fneumann/kernel_quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fneumann {

namespace {

constexpr double kChunk = 2.0;

struct Tail {
  bool active = false;
  Complex amplitude{};
  Complex exponent{};
};

double truncation(const QuadratureSpec& q, double x) { return std::max(q.domain_truncation, 50.0 * x); }

Tail tail_of(const HalfLineFunction& u, double T, const QuadratureSpec& q) {
  Tail tail;
  if (!q.tail_exponent_correction) return tail;
  if (u.has_tail) {
    tail.active = true;
    tail.amplitude = u.tail_amplitude;
    tail.exponent = u.tail_exponent;
    return tail;
  }
  const Complex a = u.value(T);
  const Complex b = u.value(2.0 * T);
  if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return tail;
  tail.active = true;
  tail.exponent = std::log(b / a) / std::numbers::ln2;
  tail.amplitude = a * std::pow(T, -tail.exponent);
  return tail;
}

// int_0^upper g(y) dy through y = e^t, with breakpoints lo <= hi; upper may be infinite.
template <class G>
Estimate<Complex> log_line(G&& g, double lo, double hi, double upper, const QuadratureSpec& q) {
  auto h = [&](double t) -> Complex {
    const double y = std::exp(t);
    return g(y) * y;
  };
  const double a = std::log(lo);
  const double b = std::log(hi);
  Estimate<Complex> out = integrate_outward(h, a, -1.0, kChunk, q.rel_tol, q.abs_tol);
  out += integrate(h, a, b, q.rel_tol, q.abs_tol, q.max_intervals);
  if (std::isinf(upper)) {
    out += integrate_outward(h, b, 1.0, kChunk, q.rel_tol, q.abs_tol);
  } else if (upper > hi) {
    out += integrate(h, b, std::log(upper), q.rel_tol, q.abs_tol, q.max_intervals);
  }
  return out;
}

// c_s p.v. int_0^inf (u(x) - u(y)) |x - y|^(-1-2s) dy
Estimate<Complex> singular_part(const Order& order, const HalfLineFunction& u, double x, double T,
                                const Tail& tail, const QuadratureSpec& q) {
  const double s = order.s();
  const double r = q.singular_split_radius * x;
  const Complex ux = u.value(x);
  Estimate<Complex> out;

  // |y - x| < r: symmetric second differences; the innermost piece uses the
  // Taylor expansion 2u(x) - u(x+h) - u(x-h) = -u''(x) h^2 + O(h^4).
  const double h0 = 1e-3 * x;
  out.value += -u.second(x) * std::pow(h0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  auto near = [&](double t) -> Complex {
    const double h = std::exp(t);
    return (2.0 * ux - u.value(x + h) - u.value(x - h)) * std::pow(h, -2.0 * s);
  };
  out += integrate(near, std::log(h0), std::log(r), q.rel_tol, q.abs_tol, q.max_intervals);

  // 0 < y < x - r
  auto left = [&](double t) -> Complex {
    const double y = std::exp(t);
    return (ux - u.value(y)) * std::pow(x - y, -1.0 - 2.0 * s) * y;
  };
  out += integrate_outward(left, std::log(x - r), -1.0, kChunk, q.rel_tol, q.abs_tol);

  // x + r < y < T, in the distance d = y - x
  auto right = [&](double t) -> Complex {
    const double d = std::exp(t);
    return (ux - u.value(x + d)) * std::pow(d, -2.0 * s);
  };
  out += integrate(right, std::log(r), std::log(T - x), q.rel_tol, q.abs_tol, q.max_intervals);

  if (q.tail_exponent_correction) {
    out.value += ux * std::pow(T - x, -2.0 * s) / (2.0 * s);
    if (tail.active) out.value -= power_law_tail(tail.amplitude, tail.exponent, 1.0 + 2.0 * s, -x, T);
  }
  out.value *= order.c1();
  out.error *= order.c1();
  return out;
}

// int_0^inf u(y) (y + z)^(-1-2s) dy
Estimate<Complex> weighted_mass(const Order& order, const HalfLineFunction& u, double z, double T,
                                const Tail& tail, const QuadratureSpec& q) {
  const double s = order.s();
  const double Y = std::max(T, 4.0 * z);
  auto g = [&](double y) -> Complex { return u.value(y) * std::pow(y + z, -1.0 - 2.0 * s); };
  Estimate<Complex> out = log_line(g, std::min(z, 1.0), std::max(z, 1.0), Y, q);
  if (tail.active) out.value += power_law_tail(tail.amplitude, tail.exponent, 1.0 + 2.0 * s, z, Y);
  return out;
}

// int_0^inf (u(x) - u(y)) k(x, y) dy
Estimate<Complex> correction_part(const Order& order, const HalfLineFunction& u, double x, double T,
                                  const Tail& tail, const QuadratureSpec& q) {
  const double s = order.s();
  const double cs = order.c1();
  const double Z = 10.0 * T;
  auto outer = [&](double z) -> Complex {
    return std::pow(z, 2.0 * s) * std::pow(x + z, -1.0 - 2.0 * s) * weighted_mass(order, u, z, T, tail, q).value;
  };
  Estimate<Complex> mass = log_line(outer, x, x, Z, q);
  if (q.tail_exponent_correction) {
    const Complex i1 = weighted_mass(order, u, Z, T, tail, q).value;
    const Complex i2 = weighted_mass(order, u, 2.0 * Z, T, tail, q).value;
    if (std::abs(i1) > 0.0 && std::abs(i2) > 0.0) {
      const Complex expo = std::log(i2 / i1) / std::numbers::ln2;
      const Complex amp = i1 * std::pow(Z, -expo);
      mass.value += power_law_tail(amp, 2.0 * s + expo, 1.0 + 2.0 * s, x, Z);
    }
  }
  Estimate<Complex> out;
  out.value = u.value(x) * cs * std::pow(x, -2.0 * s) / (2.0 * s) - 2.0 * s * cs * mass.value;
  out.error = 2.0 * s * cs * mass.error;
  out.evaluations = mass.evaluations;
  return out;
}

}  // namespace

HalfLineFunction HalfLineFunction::power(Complex beta) {
  HalfLineFunction u;
  u.value = [beta](double y) { return std::pow(y, beta); };
  u.first = [beta](double y) { return beta * std::pow(y, beta - 1.0); };
  u.second = [beta](double y) { return beta * (beta - 1.0) * std::pow(y, beta - 2.0); };
  u.has_tail = true;
  u.tail_exponent = beta;
  u.tail_amplitude = 1.0;
  return u;
}

TestFunction TestFunction::scaled(double factor) const {
  TestFunction out;
  out.value = [f = value, factor](double x) { return factor * f(x); };
  out.first = [f = first, factor](double x) { return factor * f(x); };
  out.second = [f = second, factor](double x) { return factor * f(x); };
  return out;
}

HalfLineFunction TestFunction::as_half_line() const {
  HalfLineFunction u;
  u.value = [f = value](double x) { return Complex(f(x), 0.0); };
  u.first = [f = first](double x) { return Complex(f(x), 0.0); };
  u.second = [f = second](double x) { return Complex(f(x), 0.0); };
  return u;
}

TestFunction boundary_bump(const Order& order) {
  const double m = 0.5 * (3.0 + 2.0 * order.s());
  TestFunction phi;
  // phi = x^2 w^-m with w = 1 + x^2
  phi.value = [m](double x) { return x * x * std::pow(1.0 + x * x, -m); };
  phi.first = [m](double x) {
    const double w = 1.0 + x * x;
    return std::pow(w, -m - 1.0) * (2.0 * x * w - 2.0 * m * x * x * x);
  };
  phi.second = [m](double x) {
    const double w = 1.0 + x * x;
    const double x2 = x * x;
    return std::pow(w, -m - 2.0) *
           (2.0 * w * w - 10.0 * m * x2 * w + 4.0 * m * (m + 1.0) * x2 * x2);
  };
  return phi;
}

double kernel_k_correction(const Order& order, double x, double y, const QuadratureSpec& q) {
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("kernel_k_correction needs x, y > 0");
  const double s = order.s();
  auto g = [&](double z) -> Complex {
    return std::pow(z, 2.0 * s) * std::pow(x + z, -1.0 - 2.0 * s) * std::pow(y + z, -1.0 - 2.0 * s);
  };
  const auto est = log_line(g, std::min(x, y), std::max(x, y), std::numeric_limits<double>::infinity(), q);
  return 2.0 * s * order.c1() * est.value.real();
}

double kernel_half_line(const Order& order, double x, double y, const QuadratureSpec& q) {
  return order.c1() * std::pow(std::abs(x - y), -1.0 - 2.0 * order.s()) + kernel_k_correction(order, x, y, q);
}

Estimate<double> kernel_k_row_integral(const Order& order, double x, const QuadratureSpec& q) {
  const QuadratureSpec inner = q.tightened(0.1);
  auto g = [&](double y) -> Complex { return kernel_k_correction(order, x, y, inner); };
  const auto est = log_line(g, x, x, std::numeric_limits<double>::infinity(), q);
  return {est.value.real(), est.error, est.evaluations};
}

Estimate<Complex> apply_L(const Order& order, const HalfLineFunction& u, double x, const QuadratureSpec& q) {
  q.validate();
  if (!(x > 0.0)) throw std::invalid_argument("apply_L needs x > 0");
  const double T = truncation(q, x);
  const Tail tail = tail_of(u, T, q);
  Estimate<Complex> out = singular_part(order, u, x, T, tail, q);
  out += correction_part(order, u, x, T, tail, q);
  return out;
}

Estimate<Complex> apply_L_power(const Order& order, Complex beta, double x, const QuadratureSpec& q) {
  const double s = order.s();
  if (!(beta.real() > -1.0 && beta.real() < 2.0 * s + 1.0) || std::abs(beta - 2.0 * s) < 1e-3)
    throw std::invalid_argument("apply_L_power needs -1 < Re beta < 2s + 1 and beta away from 2s");
  return apply_L(order, HalfLineFunction::power(beta), x, q);
}

Estimate<double> apply_L_test(const Order& order, const TestFunction& phi, double x, const QuadratureSpec& q) {
  const auto est = apply_L(order, phi.as_half_line(), x, q);
  return {est.value.real(), est.error, est.evaluations};
}

Estimate<Complex> apply_dirichlet_power(const Order& order, Complex beta, double x, const QuadratureSpec& q) {
  q.validate();
  const double s = order.s();
  if (!(beta.real() > -1.0 && beta.real() < 2.0 * s)) throw std::invalid_argument("apply_dirichlet_power needs -1 < Re beta < 2s");
  const auto u = HalfLineFunction::power(beta);
  const double T = truncation(q, x);
  const Tail tail = tail_of(u, T, q);
  Estimate<Complex> out = singular_part(order, u, x, T, tail, q);
  // the exterior (-inf, 0) where u vanishes
  out.value += order.c1() * u.value(x) * std::pow(x, -2.0 * s) / (2.0 * s);
  return out;
}

double selfadjoint_check(const Order& order, double beta, const TestFunction& phi, const QuadratureSpec& q) {
  const double s = order.s();
  if (!(beta > 0.0 && beta < 2.0 * s)) throw std::invalid_argument("selfadjoint_check needs 0 < beta < 2s");
  QuadratureSpec outer = q;
  outer.rel_tol = std::max(q.rel_tol, 1e-7);
  QuadratureSpec inner = q;
  inner.rel_tol = std::max(q.rel_tol, 1e-9);

  // int x^(beta-1) L phi(x) dx
  auto lhs_integrand = [&](double x) -> Complex {
    return std::pow(x, beta - 1.0) * apply_L_test(order, phi, x, inner).value;
  };
  const double lhs = log_line(lhs_integrand, 1.0, 1.0, std::numeric_limits<double>::infinity(), outer).value.real();

  // L(x^(beta-1)) = A x^(beta-1-2s) with A = L(x^(beta-1))(1), by homogeneity
  const Complex a = apply_L_power(order, beta - 1.0, 1.0, inner).value;
  auto rhs_integrand = [&](double x) -> Complex { return std::pow(x, beta - 1.0 - 2.0 * s) * phi.value(x); };
  const double rhs =
      (a * log_line(rhs_integrand, 1.0, 1.0, std::numeric_limits<double>::infinity(), outer).value).real();
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

double neumann_extension(const Order& order, const std::function<double(double)>& u, double x,
                         const QuadratureSpec& q) {
  if (!(x < 0.0)) throw std::invalid_argument("neumann_extension needs x < 0");
  q.validate();
  const double s = order.s();
  const double d = -x;
  HalfLineFunction w;
  w.value = [&u](double y) { return Complex(u(y), 0.0); };
  const double T = truncation(q, d);
  const Tail tail = tail_of(w, T, q);
  const Complex mass = weighted_mass(order, w, d, T, tail, q).value;
  return mass.real() / (std::pow(d, -2.0 * s) / (2.0 * s));
}

}  // namespace fneumann
