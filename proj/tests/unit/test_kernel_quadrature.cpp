#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fneumann/kernel_quadrature.hpp"

using namespace fneumann;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

HalfLineFunction constant(double c) {
  HalfLineFunction u;
  u.value = [c](double) { return Complex(c, 0.0); };
  u.first = [](double) { return Complex(0.0, 0.0); };
  u.second = u.first;
  return u;
}

}  // namespace

TEST_CASE("correction kernel") {
  for (double s : {0.3, 0.5, 0.7}) {
    const Order o(s);
    const auto row = kernel_k_row_integral(o, 1.0);
    CHECK(std::abs(row.value / (o.c1() / (2.0 * s)) - 1.0) <= 1e-6);
  }
  const Order o4(0.4);
  CHECK(std::abs(kernel_k_correction(o4, 0.3, 2.1) - kernel_k_correction(o4, 2.1, 0.3)) <=
        1e-9 * kernel_k_correction(o4, 0.3, 2.1));
  const Order o6(0.6);
  CHECK(std::abs(kernel_k_correction(o6, 3.0, 6.0) / kernel_k_correction(o6, 1.0, 2.0) - std::pow(3.0, -2.2)) <=
        1e-7 * std::pow(3.0, -2.2));
  CHECK(kernel_k_correction(o4, 0.1, 40.0) > 0.0);
  CHECK_THROWS(kernel_k_correction(o4, 0.0, 1.0));
}

TEST_CASE("kernel bounds") {
  const Order o(0.45);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> logx(-3.0, 3.0);
  std::uniform_real_distribution<double> ratio(1.0, 2.0);
  const double k11 = kernel_k_correction(o, 1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double x = std::exp(logx(rng));
    const double y = x * ratio(rng);
    if (std::abs(x - y) > 1e-12) CHECK(kernel_half_line(o, x, y) >= o.c1() * std::pow(std::abs(x - y), -1.9));
    // min{x,y} >= |x-y|: k * min^{1+2s} is bounded, with the supremum on the diagonal
    CHECK(kernel_k_correction(o, x, y) * std::pow(x, 1.9) <= k11 * (1.0 + 1e-9));
  }
}

TEST_CASE("operator on powers matches the symbol") {
  for (double s : {0.3, 0.5, 0.7}) {
    const Order o(s);
    double worst = 0.0;
    for (double b = std::max(0.0, 2.0 * s - 1.0) + 0.05; b < 2.0 * s - 0.05 + 1e-9; b += 0.1)
      worst = std::max(worst, rel(apply_L_power(o, b, 1.0).value, f_symbol(o, b).value));
    CHECK(worst <= 1e-3);
  }
  const Order o5(0.5);
  CHECK(rel(apply_L_power(o5, 0.5, 1.0).value, f_symbol(o5, 0.5).value) <= 1e-4);
  CHECK(rel(apply_L_power(o5, Complex(1.0, 0.5), 1.0).value, f_symbol(o5, Complex(1.0, 0.5)).value) <= 1e-4);

  const Order o45(0.45);
  const Complex ratio = apply_L_power(o45, 0.6, 2.0).value / apply_L_power(o45, 0.6, 1.0).value;
  CHECK(std::abs(ratio - std::pow(2.0, 0.6 - 0.9)) <= 1e-4);

  const Order o75(0.75);
  for (double x : {0.5, 1.0, 2.0}) CHECK(std::abs(apply_L_power(o75, 0.5, x).value) <= 1e-4);

  CHECK_THROWS(apply_L_power(o5, 2.5, 1.0));
  CHECK_THROWS(apply_L_power(o5, 1.0 + 1e-4, 1.0));
}

TEST_CASE("continued tails beyond beta = 2s") {
  // Re beta > 2s: the truncated integrals plus continued tails reproduce the symbol.
  const Order o(0.25);
  for (Complex b : {Complex(0.7, 0.0), Complex(0.85, 0.2), Complex(1.2, -0.4)}) {
    CHECK(rel(apply_L_power(o, b, 1.0).value, f_symbol(o, b).value) <= 1e-6);
    CHECK(rel(apply_L_power(o, b, 3.0).value, f_symbol(o, b).value * std::pow(3.0, b - 0.5)) <= 1e-6);
  }
}

TEST_CASE("quadrature error estimate is honest") {
  const Order o(0.5);
  QuadratureSpec q;
  q.rel_tol = 1e-7;
  const auto coarse = apply_L_power(o, 0.35, 1.0, q);
  const auto fine = apply_L_power(o, 0.35, 1.0, q.tightened(0.5));
  CHECK(std::abs(coarse.value - fine.value) < 5.0 * coarse.error);
}

TEST_CASE("test functions") {
  const Order o3(0.3);
  CHECK(std::abs(apply_L(o3, constant(1.0), 1.0).value) <= 1e-8);

  const Order o5(0.5);
  const auto phi = boundary_bump(o5);
  const double base = apply_L_test(o5, phi, 1.0).value;
  CHECK(std::isfinite(base));
  QuadratureSpec tight;
  tight.rel_tol = 1e-12;
  CHECK(std::abs(apply_L_test(o5, phi, 1.0, tight).value - base) <= 1e-5 * std::abs(base));
  CHECK(std::abs(apply_L_test(o5, phi.scaled(2.5), 1.0).value - 2.5 * base) <= 1e-12 * std::abs(base));

  // derivatives of the bump against central differences
  const double h = 1e-5;
  for (double x : {0.2, 1.3, 7.0}) {
    CHECK(phi.first(x) == doctest::Approx((phi.value(x + h) - phi.value(x - h)) / (2 * h)).epsilon(1e-8));
    CHECK(phi.second(x) == doctest::Approx((phi.first(x + h) - phi.first(x - h)) / (2 * h)).epsilon(1e-8));
  }
}

TEST_CASE("bound shape near the boundary") {
  const Order o(0.5);
  const auto phi = boundary_bump(o);
  auto shape = [&](double x) { return (1.0 + std::abs(std::log(x))) * (1.0 + std::pow(x, 1.0 - 2.0 * 0.5)); };
  double fitted = 0.0;
  for (double x = 1e-3; x <= 2.0; x *= 2.0) fitted = std::max(fitted, std::abs(apply_L_test(o, phi, x).value) / shape(x));
  for (double x = 1e-10; x < 1e-3; x *= 10.0) CHECK(std::abs(apply_L_test(o, phi, x).value) / shape(x) <= 2.0 * fitted);
}

TEST_CASE("self-adjointness") {
  const Order o5(0.5);
  const auto phi5 = boundary_bump(o5);
  const double d = selfadjoint_check(o5, 0.6, phi5);
  CHECK(d <= 1e-3);
  CHECK(std::abs(selfadjoint_check(o5, 0.6, phi5.scaled(2.0)) - d) <= 1e-6);
  const Order o3(0.3);
  CHECK(selfadjoint_check(o3, 0.25, boundary_bump(o3)) <= 1e-3);
}

TEST_CASE("Dirichlet operator on powers") {
  const Order o(0.5);
  CHECK(std::abs(apply_dirichlet_power(o, 0.5, 1.0).value) <= 1e-4);
  CHECK(std::abs(apply_dirichlet_power(o, -0.5, 1.0).value) <= 1e-4);
  const Order o3(0.3);
  CHECK(rel(apply_dirichlet_power(o3, Complex(0.2, 0.7), 1.0).value, dirichlet_symbol(o3, Complex(0.2, 0.7))) <= 1e-6);
}

TEST_CASE("Neumann extension") {
  const Order o(0.5);
  CHECK(std::abs(neumann_extension(o, [](double) { return 1.0; }, -0.5) - 1.0) <= 1e-10);
  CHECK(std::abs(neumann_extension(o, [](double y) { return std::sqrt(y); }, -1.0) - std::numbers::pi / 2.0) <= 1e-8);
  auto u1 = [](double y) { return std::exp(-y); };
  auto u2 = [](double y) { return 1.0 / (1.0 + y * y); };
  const double combo = neumann_extension(o, [&](double y) { return 2.0 * u1(y) - 3.0 * u2(y); }, -0.7);
  CHECK(combo == doctest::Approx(2.0 * neumann_extension(o, u1, -0.7) - 3.0 * neumann_extension(o, u2, -0.7)).epsilon(1e-9));
  CHECK_THROWS(neumann_extension(o, u1, 0.5));
}
