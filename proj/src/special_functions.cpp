#include "fneumann/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace fneumann {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Bernoulli numbers B_2, B_4, ..., B_14.
constexpr std::array<double, 7> kBernoulli = {1.0 / 6.0,     -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                              5.0 / 66.0,    -691.0 / 2730.0, 7.0 / 6.0};

// Reduce x into [-1, 1] modulo 2; exact in floating point.
double reduce_mod2(double x) {
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  return r;
}

Complex lanczos_log_gamma(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

Complex lanczos_gamma(Complex z) {
  // Direct product form for moderate arguments keeps the relative error at
  // a few ulp; the log form takes over when t^(z+1/2) would overflow.
  if (std::abs(z) < 100.0) {
    const Complex zm = z - 1.0;
    Complex x = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (zm + static_cast<double>(i));
    const Complex t = zm + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::exp((zm + 0.5) * std::log(t) - t) * x;
  }
  return std::exp(lanczos_log_gamma(z));
}

}  // namespace

bool near_nonpositive_integer(Complex z, double tol) {
  const double n = std::round(z.real());
  if (n > 0.0) return false;
  return std::abs(z - Complex(n, 0.0)) < tol;
}

double sin_pi(double x) {
  const double r = reduce_mod2(x);
  // r in [-1, 1]; fold onto [-1/2, 1/2] using sin(pi (1 - r)) = sin(pi r).
  if (r > 0.5) return std::sin(kPi * (1.0 - r));
  if (r < -0.5) return std::sin(kPi * (-1.0 - r));
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

Complex sin_pi(Complex z) {
  const double x = z.real();
  const double ay = kPi * std::abs(z.imag());
  double ch;
  double sh;
  if (ay > 30.0) {
    const double e = 0.5 * std::exp(ay);
    const double tail = std::exp(-2.0 * ay);
    ch = e * (1.0 + tail);
    sh = e * (1.0 - tail);
  } else {
    ch = std::cosh(ay);
    sh = std::sinh(ay);
  }
  if (z.imag() < 0.0) sh = -sh;
  return {sin_pi(x) * ch, cos_pi(x) * sh};
}

Complex cos_pi(Complex z) {
  const double x = z.real();
  const double ay = kPi * std::abs(z.imag());
  double ch;
  double sh;
  if (ay > 30.0) {
    const double e = 0.5 * std::exp(ay);
    const double tail = std::exp(-2.0 * ay);
    ch = e * (1.0 + tail);
    sh = e * (1.0 - tail);
  } else {
    ch = std::cosh(ay);
    sh = std::sinh(ay);
  }
  if (z.imag() < 0.0) sh = -sh;
  return {cos_pi(x) * ch, -sin_pi(x) * sh};
}

Complex log_sin_pi(Complex z) {
  const double y = z.imag();
  if (std::abs(y) <= 30.0) return std::log(sin_pi(z));
  const Complex zr(reduce_mod2(z.real()), y);
  const Complex i(0.0, 1.0);
  if (y > 0.0) {
    // sin(pi z) = (i / 2) e^{-i pi z} (1 - e^{2 i pi z})
    return -i * kPi * zr + std::log(Complex(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * i * kPi * zr));
  }
  // sin(pi z) = (-i / 2) e^{i pi z} (1 - e^{-2 i pi z})
  return i * kPi * zr + std::log(Complex(0.0, -0.5)) + std::log(1.0 - std::exp(-2.0 * i * kPi * zr));
}

Complex cot_pi(Complex z) {
  const Complex i(0.0, 1.0);
  const Complex zr(reduce_mod2(z.real()), z.imag());
  if (z.imag() >= 0.0) {
    const Complex w = std::exp(2.0 * i * kPi * zr);
    return i * (w + 1.0) / (w - 1.0);
  }
  const Complex w = std::exp(-2.0 * i * kPi * zr);
  return i * (1.0 + w) / (1.0 - w);
}

Complex complex_gamma(Complex z) {
  if (near_nonpositive_integer(z)) throw PoleAt(z, "gamma");
  if (z.real() < 0.5) return kPi / (sin_pi(z) * lanczos_gamma(1.0 - z));
  return lanczos_gamma(z);
}

Complex complex_log_gamma(Complex z) {
  if (near_nonpositive_integer(z)) throw PoleAt(z, "log_gamma");
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
  return lanczos_log_gamma(z);
}

Complex digamma(Complex z) {
  if (near_nonpositive_integer(z)) throw PoleAt(z, "digamma");
  if (z.real() < 0.5) return digamma(1.0 - z) - kPi * cot_pi(z);
  Complex acc = 0.0;
  while (z.real() < 8.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv2 = 1.0 / (z * z);
  Complex series = 0.0;
  Complex power = inv2;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    series += kBernoulli[k] / (2.0 * static_cast<double>(k + 1)) * power;
    power *= inv2;
  }
  return acc + std::log(z) - 0.5 / z - series;
}

}  // namespace fneumann
