#include "fneumann/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fneumann/kernel_quadrature.hpp"
#include "fneumann/mellin_numeric.hpp"
#include "fneumann/special_functions.hpp"

namespace fneumann {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(Complex a, Complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

std::vector<CheckResult> verify_special_functions(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-5.0, 5.0);
  std::uniform_real_distribution<double> im(-20.0, 20.0);
  double recurrence = 0.0, reflection = 0.0, conjugation = 0.0, psi_recurrence = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Complex z(re(rng), im(rng));
    if (near_nonpositive_integer(z, 1e-6) || near_nonpositive_integer(z + 1.0, 1e-6) || near_nonpositive_integer(1.0 - z, 1e-6))
      continue;
    recurrence = std::max(recurrence, rel(complex_gamma(z + 1.0), z * complex_gamma(z)));
    reflection = std::max(reflection, std::abs(complex_gamma(z) * complex_gamma(1.0 - z) * sin_pi(z) / kPi - 1.0));
    conjugation = std::max(conjugation, rel(complex_gamma(std::conj(z)), std::conj(complex_gamma(z))));
    psi_recurrence = std::max(psi_recurrence, std::abs(digamma(z + 1.0) - digamma(z) - 1.0 / z) / (1.0 + std::abs(digamma(z))));
  }
  double stirling = 0.0;
  double psi_asymptotic = 0.0;
  for (double x : {0.5, 1.5, 3.0}) {
    for (double y : {40.0, -40.0}) {
      const Complex z(x, y);
      const double model = std::sqrt(2.0 * kPi) * std::pow(std::abs(y), x - 0.5) * std::exp(-kPi * std::abs(y) / 2.0);
      stirling = std::max(stirling, std::abs(std::abs(complex_gamma(z)) / model - 1.0));
      psi_asymptotic = std::max(psi_asymptotic, rel(digamma(z), std::log(z) - 0.5 / z));
    }
  }
  return {
      {"special", "gamma_recurrence", recurrence, 1e-12},
      {"special", "gamma_reflection", reflection, 1e-11},
      {"special", "gamma_conjugation", conjugation, 1e-13},
      {"special", "digamma_recurrence", psi_recurrence, 1e-11},
      {"special", "gamma_stirling_im40", stirling, 0.02},
      {"special", "digamma_asymptotic_im40", psi_asymptotic, 0.02},
  };
}

std::vector<CheckResult> verify_symbols(const Order& order, int samples, std::uint64_t seed) {
  const double s = order.s();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  std::uniform_real_distribution<double> im(-5.0, 5.0);
  double forms = 0.0, reflect = 0.0, conj = 0.0, bridge = 0.0, planar = 0.0;
  for (int k = 0; k < samples;) {
    const Complex beta(re(rng), im(rng));
    if (std::abs(beta - nearest_f_pole(order, beta)) < 1e-3) continue;
    ++k;
    const Complex fp = f_symbol(order, beta).value;
    forms = std::max(forms, rel(fp, f_symbol(order, beta, FForm::difference).value));
    reflect = std::max(reflect, rel(fp, f_symbol(order, 2.0 * s - 1.0 - beta).value));
    conj = std::max(conj, rel(f_symbol(order, std::conj(beta)).value, std::conj(fp)));
    if (beta.real() < 2.0 * s + 1.0 - 1e-3)
      bridge = std::max(bridge, rel(F_entire(order, beta), -(2.0 * s - beta) * sin_pi(s) * g_aux(order, beta)));
    const Complex multiple =
        -std::tgamma(1.0 + 2.0 * s) / (2.0 * s * complex_gamma(2.0 * s - beta) * complex_gamma(beta + 1.0));
    planar = std::max(planar, rel(f1_f2_symbols(order, beta).f2.value, multiple * fp));
  }
  return {
      {"symbols", "f_two_forms", forms, 1e-10},
      {"symbols", "f_reflection", reflect, 1e-10},
      {"symbols", "f_conjugation", conj, 1e-10},
      {"symbols", "F_equals_sine_times_g", bridge, 1e-10},
      {"symbols", "f2_multiple_of_f", planar, 1e-10},
  };
}

std::vector<CheckResult> verify_kernel(const Order& order, std::optional<double> selfadjoint_beta) {
  const double s = order.s();
  double power = 0.0;
  for (double b = std::max(0.0, 2.0 * s - 1.0) + 0.05; b < 2.0 * s - 0.05 + 1e-9; b += 0.1)
    power = std::max(power, std::abs(apply_L_power(order, b, 1.0).value - f_symbol(order, b).value) /
                                std::abs(f_symbol(order, b).value));
  const double row = std::abs(kernel_k_row_integral(order, 1.0).value / (order.c1() / (2.0 * s)) - 1.0);
  const double beta = selfadjoint_beta.value_or(s + 0.1 < 2.0 * s ? s + 0.1 : s);
  const double adjoint = selfadjoint_check(order, beta, boundary_bump(order));
  return {
      {"kernel", "L_power_vs_symbol", power, 1e-3},
      {"kernel", "k_row_integral", row, 1e-6},
      {"kernel", "selfadjoint", adjoint, 1e-3},
  };
}

std::vector<CheckResult> verify_mellin(const Order& order, std::optional<double> magic_z) {
  const double s = order.s();
  const auto phi = gaussian_profile();
  const Complex z0(0.5, 0.7);
  auto inverse = [&](double x) { return inverse_mellin(phi, x, 0.5, QuadratureSpec{}.tightened(0.01)).value; };
  const double round_trip = std::abs(mellin_transform(inverse, z0).value - phi(z0)) / std::abs(phi(z0));
  const double lo = std::max(0.0, 2.0 * s - 1.0) + 0.05;
  const double hi = 2.0 * s - 0.05;
  const double z = magic_z.value_or(0.5 * (lo + hi));
  return {
      {"mellin", "inversion_round_trip", round_trip, 1e-6},
      {"mellin", "dirac_alpha_0", dirac_pairing_check(0.0, 0, phi), 1e-5},
      {"mellin", "dirac_alpha_0.4+0.9i", dirac_pairing_check(Complex(0.4, 0.9), 0, phi), 1e-5},
      {"mellin", "dirac_log_moment_l1", dirac_pairing_check(0.2, 1, phi), 1e-4},
      {"mellin", "operator_identity", mellin_magic_check(order, phi, z), 1e-2},
      {"mellin", "plancherel", plancherel_check([](double x) { return std::exp(-x); }, phi).defect, 1e-5},
  };
}

}  // namespace fneumann
