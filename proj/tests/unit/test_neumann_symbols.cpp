#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fneumann/neumann_symbols.hpp"
#include "fneumann/special_functions.hpp"

using namespace fneumann;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

Complex f(const Order& o, Complex beta, FForm form = FForm::product) { return f_symbol(o, beta, form).value; }

struct Sample {
  double s;
  Complex beta;
};

// Random (s, beta) pairs with beta kept 1e-3 away from every pole of f.
std::vector<Sample> random_grid(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> su(0.05, 0.95);
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  std::uniform_real_distribution<double> im(-5.0, 5.0);
  std::vector<Sample> out;
  while (static_cast<int>(out.size()) < count) {
    const Order o(su(rng));
    const Complex beta(re(rng), im(rng));
    if (std::abs(beta - nearest_f_pole(o, beta)) < 1e-3) continue;
    out.push_back({o.s(), beta});
  }
  return out;
}

}  // namespace

TEST_CASE("order constants") {
  CHECK_THROWS_AS(Order(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Order(1.0), std::invalid_argument);
  CHECK(Order(0.5).c1() == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  for (double s : {0.1, 0.37, 0.8}) {
    const Order o(s);
    CHECK(o.c1() > 0.0);
    const double direct = std::pow(4.0, s) * s * std::tgamma(s + 0.5) / std::tgamma(1.0 - s) / std::sqrt(kPi);
    CHECK(o.c1() == doctest::Approx(direct).epsilon(1e-14));
    CHECK(o.c1() == doctest::Approx(std::sin(kPi * s) * std::tgamma(1.0 + 2.0 * s) / kPi).epsilon(1e-13));
    CHECK(o.c(2) == doctest::Approx(std::pow(4.0, s) * s / kPi * std::tgamma(1.0 + s) / std::tgamma(1.0 - s)));
  }
}

TEST_CASE("C_beta") {
  CHECK(std::abs(c_beta(Order(0.4), 0.0) - 1.25) < 1e-14);
  CHECK(std::abs(c_beta(Order(0.5), 0.5) - kPi / 2.0) < 1e-14);
  // mpmath closed form
  CHECK(rel(c_beta(Order(0.35), Complex(0.3, 0.2)), Complex(1.69658126300538870, 0.803614235154692336)) < 1e-13);
  for (double b : {-0.9, -0.2, 0.3, 0.75}) CHECK(c_beta(Order(0.4), b).real() > 0.0);
  CHECK(std::abs(c_beta(Order(0.4), 0.3).imag()) < 1e-16);
  CHECK_THROWS_AS(c_beta(Order(0.4), 0.8), PoleAt);
  CHECK_THROWS_AS(c_beta(Order(0.4), 1.8), PoleAt);
  CHECK_THROWS_AS(c_beta(Order(0.4), -1.0), PoleAt);
}

TEST_CASE("f at special points") {
  for (int k = 1; k <= 9; ++k) {
    const Order o(0.1 * k);
    CHECK(std::abs(f(o, 0.0)) < 1e-13);
    CHECK(std::abs(f(o, 0.0, FForm::difference)) < 1e-13);
  }
  const Order o75(0.75);
  CHECK(std::abs(f(o75, 0.5)) < 1e-13);
  CHECK(std::abs(f(o75, 0.5, FForm::difference)) < 1e-13);

  // mpmath evaluations of the difference form
  CHECK(rel(f(Order(0.5), Complex(1.0, 0.5)), Complex(0.990068440279937218, -0.497127764172364093)) < 1e-12);
  CHECK(rel(f(Order(0.3), Complex(0.45, -2.2)), Complex(1.61667692304430543, 0.284345775685355144)) < 1e-12);
  CHECK(rel(f(Order(0.8), Complex(-1.3, 4.0)), Complex(8.54626272468974391, 5.90913756880515960)) < 1e-12);
}

TEST_CASE("f poles are flagged") {
  const Order o(0.4);
  for (Complex p : {Complex(0.8, 0.0), Complex(2.8, 0.0), Complex(-1.0, 0.0), Complex(-3.0, 0.0)}) {
    const auto v = f_symbol(o, p + 1e-11);
    CHECK(v.is_pole);
    REQUIRE(v.nearest_pole.has_value());
    CHECK(std::abs(*v.nearest_pole - p) < 1e-14);
  }
  CHECK_FALSE(f_symbol(o, 0.8 + 1e-6).is_pole);
  // 2s - 2 = -1.2 is not a pole: the Gamma pole cancels against the sine zero.
  const auto removable = f_symbol(o, -1.2);
  CHECK_FALSE(removable.is_pole);
  CHECK(std::isfinite(std::abs(removable.value)));
  CHECK(rel(removable.value, f(o, -1.2 + 1e-5)) < 1e-4);
  CHECK(rel(removable.value, f(o, 1.0)) < 1e-13);
  CHECK(std::abs(f(o, -0.2)) < 1e-14);
}

TEST_CASE("g and the entire surrogate F") {
  for (double s : {0.2, 0.5, 0.9}) CHECK(std::abs(g_aux(Order(s), 0.0)) < 1e-14);
  CHECK(std::abs(g_aux(Order(0.7), 0.4)) < 1e-14);
  CHECK(std::abs(g_aux(Order(0.5), Complex(1.193292, 0.4406488))) <= 1e-5);
  CHECK_THROWS_AS(g_aux(Order(0.5), 1.0), PoleAt);

  CHECK(std::abs(F_entire(Order(0.5), 1.0) + 1.0) < 1e-14);
  for (double s : {0.15, 0.6}) {
    const Order o(s);
    CHECK(std::abs(F_entire(o, 2.0 * s) + 2.0 * s * std::sin(kPi * s)) < 1e-13);
    CHECK(std::abs(F_entire(o, 0.0)) < 1e-14);
  }
  const Order o6(0.6);
  const Complex b(0.8, 0.3);
  CHECK(std::abs(F_entire(o6, b) + (1.2 - b) * std::sin(0.6 * kPi) * g_aux(o6, b)) < 1e-10);
}

TEST_CASE("derivative of F") {
  const Order o(0.5);
  const Complex b(1.1, 0.4);
  const double h = 1e-6;
  const Complex fd = (F_entire(o, b + h) - F_entire(o, b - h)) / (2.0 * h);
  CHECK(rel(dF_dbeta(o, b), fd) < 1e-5);
  const Complex bi(1.1, 0.4);
  const Complex fdi = (F_entire(o, b + Complex(0, h)) - F_entire(o, b - Complex(0, h))) / Complex(0, 2.0 * h);
  CHECK(rel(dF_dbeta(o, bi), fdi) < 1e-5);

  const Order o3(0.3);
  const Complex c(0.9, 0.2);
  CHECK(rel(dF_dbeta(o3, std::conj(c)), std::conj(dF_dbeta(o3, c))) < 1e-14);

  // Newton from near the s = 1/2 zero converges and then stays put.
  Complex z(1.2, 0.45);
  for (int k = 0; k < 30; ++k) z -= F_entire(o, z) / dF_dbeta(o, z);
  CHECK(std::abs(z - Complex(1.193292241, 0.440648835)) < 1e-8);
  CHECK(std::abs(F_entire(o, z) / dF_dbeta(o, z)) < 1e-14);
}

TEST_CASE("half-line symbols") {
  const Order o(0.5);
  const auto at_s = halfline_symbols(o, 0.5);
  CHECK(std::abs(at_s.fL_plus) < 1e-15);
  CHECK(std::abs(at_s.fN_minus - 1.0 / kPi) < 1e-15);
  const auto zero = halfline_symbols(o, 0.0);
  CHECK(std::abs(zero.fL_minus + 1.0 / kPi) < 1e-15);
  CHECK(zero.fL_minus == zero.fN_plus);
  CHECK(halfline_symbols(o, Complex(0.3, 2.0)).fN_minus == zero.fN_minus);

  // Dirichlet reduction: s-1 and s are zeros of the Dirichlet symbol at s = 1/2.
  CHECK(std::abs(dirichlet_symbol(o, -0.5)) <= 1e-12);
  CHECK(std::abs(dirichlet_symbol(o, 0.5)) <= 1e-12);
  for (double s : {0.3, 0.7}) {
    const Order os(s);
    const Complex b(0.41, 1.3);
    const Complex direct = complex_gamma(b + 1.0) / complex_gamma(b - 2.0 * s + 1.0) * sin_pi(b - s) /
                           sin_pi(b - 2.0 * s);
    CHECK(rel(dirichlet_symbol(os, b), direct) < 1e-12);
    // f = fL_plus + (fL_minus)^2 * (-2s / c_s)
    const auto h = halfline_symbols(os, b);
    CHECK(rel(f(os, b), h.fL_plus - 2.0 * s / os.c1() * h.fL_minus * h.fL_minus) < 1e-12);
  }
}

TEST_CASE("f1 and f2") {
  const auto grid = random_grid(100, 99);
  for (const auto& p : grid) {
    const Order o(p.s);
    const auto planar = f1_f2_symbols(o, p.beta);
    CHECK(planar.f1.value == f(o, p.beta));
  }
  const Order o4(0.4);
  const auto near = f1_f2_symbols(o4, 0.8 + 1e-8);
  CHECK(std::abs(near.f1.value) > 1e6);
  CHECK(std::abs(near.f2.value) > 1e6);
  CHECK(f1_f2_symbols(o4, 0.8).f2.is_pole);
  CHECK(std::abs(f1_f2_symbols(Order(0.8), 0.6).f2.value) < 1e-14);
}

TEST_CASE("symbol identities on a random grid") {
  const auto grid = random_grid(200, 2024);
  double forms = 0.0;
  double reflect = 0.0;
  double conj = 0.0;
  double bridge = 0.0;
  double planar = 0.0;
  for (const auto& p : grid) {
    const Order o(p.s);
    const double s = p.s;
    const Complex fp = f(o, p.beta);
    forms = std::max(forms, rel(fp, f(o, p.beta, FForm::difference)));
    reflect = std::max(reflect, rel(fp, f(o, 2.0 * s - 1.0 - p.beta)));
    conj = std::max(conj, rel(f(o, std::conj(p.beta)), std::conj(fp)));
    if (p.beta.real() < 2.0 * s + 1.0 - 1e-3) {
      bridge = std::max(bridge, rel(F_entire(o, p.beta), -(2.0 * s - p.beta) * std::sin(kPi * s) * g_aux(o, p.beta)));
    }
    const Complex multiple = -std::tgamma(1.0 + 2.0 * s) /
                             (2.0 * s * complex_gamma(2.0 * s - p.beta) * complex_gamma(p.beta + 1.0));
    planar = std::max(planar, rel(f1_f2_symbols(o, p.beta).f2.value, multiple * fp));
  }
  CHECK(forms <= 1e-10);
  CHECK(reflect <= 1e-10);
  CHECK(conj <= 1e-10);
  CHECK(bridge <= 1e-10);
  CHECK(planar <= 1e-10);
}

TEST_CASE("large imaginary parts stay finite") {
  const Order o(0.5);
  for (double y : {50.0, 120.0, 200.0}) {
    const Complex b(1.0, y);
    const Complex v = f(o, b);
    CHECK(std::isfinite(v.real()));
    CHECK(rel(v, f(o, b, FForm::difference)) < 1e-10);
    CHECK(std::isfinite(std::abs(F_entire(o, b))));
  }
  // |f(1 + i b)| grows like |b|^{2s}
  double worst = INFINITY;
  for (double y = 20.0; y <= 60.0; y += 0.25) {
    const double ratio = std::abs(f(o, Complex(1.0, y))) / (0.5 * std::pow(y, 1.0) / 2.0);
    worst = std::min(worst, ratio);
  }
  CHECK(worst >= 1.0);
}
