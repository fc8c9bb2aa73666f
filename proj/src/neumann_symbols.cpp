#include "fneumann/neumann_symbols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fneumann/special_functions.hpp"

namespace fneumann {

namespace {

constexpr double kPi = std::numbers::pi;

// Beyond this |Im| the sines are combined in log space.
constexpr double kLogSineThreshold = 30.0;

Complex sin_ratio(Complex a, Complex b) {
  if (std::abs(a.imag()) < kLogSineThreshold && std::abs(b.imag()) < kLogSineThreshold)
    return sin_pi(a) / sin_pi(b);
  return std::exp(log_sin_pi(a) - log_sin_pi(b));
}

// Gamma(beta + 1) / (Gamma(beta - 2s + 1) sin(pi (beta - 2s))). At beta in 2s - N the
// Gamma in the denominator has a pole and the sine a zero; the reflection
// identity gives the finite value -Gamma(beta + 1) Gamma(2s - beta) / pi.
Complex dirichlet_prefactor(double s, Complex beta) {
  const Complex w = beta - 2.0 * s + 1.0;
  if (near_nonpositive_integer(w, 1e-6))
    return -std::exp(complex_log_gamma(beta + 1.0) + complex_log_gamma(2.0 * s - beta)) / kPi;
  return std::exp(complex_log_gamma(beta + 1.0) - complex_log_gamma(w) - log_sin_pi(beta - 2.0 * s));
}

Complex log_beta_product(double s, Complex beta) {
  // log(Gamma(2s - beta) Gamma(beta + 1))
  return complex_log_gamma(2.0 * s - beta) + complex_log_gamma(beta + 1.0);
}

bool near_upper_pole(double s, Complex beta) {
  const double j = std::max(0.0, std::round(beta.real() - 2.0 * s));
  return std::abs(beta - Complex(2.0 * s + j, 0.0)) < kSymbolPoleTolerance;
}

bool near_lower_pole(Complex beta) {
  const double j = std::max(0.0, std::round(-1.0 - beta.real()));
  return std::abs(beta - Complex(-1.0 - j, 0.0)) < kSymbolPoleTolerance;
}

SymbolValue pole_value(const Order& order, Complex beta) {
  SymbolValue out;
  out.value = Complex(INFINITY, 0.0);
  out.is_pole = true;
  out.nearest_pole = nearest_f_pole(order, beta);
  return out;
}

}  // namespace

Order::Order(double s) : s_(s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("order s must lie strictly inside (0, 1)");
  c1_ = c(1);
}

double Order::c(int n) const {
  const double lg = std::lgamma(0.5 * n + s_) - std::lgamma(1.0 - s_);
  return std::pow(4.0, s_) * s_ * std::pow(kPi, -0.5 * n) * std::exp(lg);
}

Complex nearest_f_pole(const Order& order, Complex beta) {
  const double s = order.s();
  const Complex upper(2.0 * s + std::max(0.0, std::round(beta.real() - 2.0 * s)), 0.0);
  const Complex lower(-1.0 - std::max(0.0, std::round(-1.0 - beta.real())), 0.0);
  return std::abs(beta - upper) <= std::abs(beta - lower) ? upper : lower;
}

Complex c_beta(const Order& order, Complex beta) {
  const double s = order.s();
  if (near_upper_pole(s, beta) || near_lower_pole(beta)) throw PoleAt(beta, "c_beta");
  return std::exp(log_beta_product(s, beta) - std::lgamma(1.0 + 2.0 * s));
}

Complex dirichlet_symbol(const Order& order, Complex beta) {
  const double s = order.s();
  if (near_upper_pole(s, beta) || near_lower_pole(beta)) throw PoleAt(beta, "dirichlet_symbol");
  const Complex w = beta - 2.0 * s + 1.0;
  if (near_nonpositive_integer(w, 1e-6)) return dirichlet_prefactor(s, beta) * sin_pi(beta - s);
  const Complex ratio = std::exp(complex_log_gamma(beta + 1.0) - complex_log_gamma(w));
  return ratio * sin_ratio(beta - s, beta - 2.0 * s);
}

SymbolValue f_symbol(const Order& order, Complex beta, FForm form) {
  const double s = order.s();
  if (near_upper_pole(s, beta) || near_lower_pole(beta)) return pole_value(order, beta);
  SymbolValue out;
  if (form == FForm::difference) {
    const Complex cb = c_beta(order, beta);
    out.value = dirichlet_symbol(order, beta) - 2.0 * s * order.c1() * cb * cb;
  } else {
    const double sin_s = sin_pi(s);
    const Complex bracket =
        sin_pi(beta - s) / sin_s + std::exp(log_beta_product(s, beta) - std::lgamma(2.0 * s));
    out.value = dirichlet_prefactor(s, beta) * sin_s * bracket;
  }
  return out;
}

Complex g_aux(const Order& order, Complex z) {
  const double s = order.s();
  if (near_upper_pole(s, z)) throw PoleAt(z, "g_aux");
  const Complex product = std::exp(log_beta_product(s, z) - std::lgamma(2.0 * s));
  return product - sin_ratio(Complex(s, 0.0) - z, Complex(s, 0.0));
}

Complex F_entire(const Order& order, Complex beta) {
  const double s = order.s();
  const Complex product =
      std::exp(complex_log_gamma(2.0 * s + 1.0 - beta) + complex_log_gamma(beta + 1.0) - std::lgamma(2.0 * s));
  return (2.0 * s - beta) * sin_pi(s - beta) - sin_pi(s) * product;
}

Complex dF_dbeta(const Order& order, Complex beta) {
  const double s = order.s();
  const Complex a = 2.0 * s + 1.0 - beta;
  const Complex product = std::exp(complex_log_gamma(a) + complex_log_gamma(beta + 1.0) - std::lgamma(2.0 * s));
  const Complex shifted = Complex(s, 0.0) - beta;
  return -sin_pi(shifted) - (2.0 * s - beta) * kPi * cos_pi(shifted) -
         sin_pi(s) * product * (digamma(beta + 1.0) - digamma(a));
}

HalflineSymbols halfline_symbols(const Order& order, Complex beta) {
  HalflineSymbols out;
  out.fL_plus = dirichlet_symbol(order, beta);
  out.fL_minus = -order.c1() * c_beta(order, beta);
  out.fN_plus = out.fL_minus;
  out.fN_minus = Complex(order.c1() / (2.0 * order.s()), 0.0);
  return out;
}

PlanarSymbols f1_f2_symbols(const Order& order, Complex beta) {
  const double s = order.s();
  PlanarSymbols out;
  out.f1 = f_symbol(order, beta);
  if (near_upper_pole(s, beta) || near_lower_pole(beta)) {
    out.f2 = pole_value(order, beta);
    return out;
  }
  // The multiple -Gamma(1+2s) / (2s Gamma(2s-beta) Gamma(beta+1)) cancels the
  // Gamma product in f; what remains is entire apart from the poles of C_beta.
  out.f2.value = std::tgamma(2.0 * s) * sin_pi(beta - s) / kPi + order.c1() * c_beta(order, beta);
  return out;
}

}  // namespace fneumann
