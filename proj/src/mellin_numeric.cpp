#include "fneumann/mellin_numeric.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fneumann {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kMoments = 6;

// The log-derivatives of the inverse transform, integrated together along one contour.
struct Moments {
  std::array<Complex, kMoments> m{};

  Moments& operator+=(const Moments& o) {
    for (int k = 0; k < kMoments; ++k) m[k] += o.m[k];
    return *this;
  }
  friend Moments operator+(Moments a, const Moments& b) { return a += b; }
  friend Moments operator-(Moments a, const Moments& b) {
    for (int k = 0; k < kMoments; ++k) a.m[k] -= b.m[k];
    return a;
  }
  friend Moments operator*(Moments a, double w) {
    for (auto& v : a.m) v *= w;
    return a;
  }
  friend double abs(const Moments& a) {
    double out = 0.0;
    for (const auto& v : a.m) out = std::max(out, std::abs(v));
    return out;
  }
};

void check_contour(const TestProfile& phi, double c) {
  if (!(std::abs(c) < phi.strip_half_width))
    throw std::invalid_argument("inversion contour lies outside the profile's strip");
}

// Quintic Hermite interpolant on [0, 1] from values and two derivatives at each end.
Complex hermite5(const Complex* left, const Complex* right, double h, double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
  const double h1 = u - 6 * u3 + 8 * u4 - 3 * u5;
  const double h2 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5);
  const double g0 = 10 * u3 - 15 * u4 + 6 * u5;
  const double g1 = -4 * u3 + 7 * u4 - 3 * u5;
  const double g2 = 0.5 * (u3 - 2 * u4 + u5);
  return h0 * left[0] + h * h1 * left[1] + h * h * h2 * left[2] + g0 * right[0] + h * g1 * right[1] +
         h * h * g2 * right[2];
}

}  // namespace

Complex TestProfile::derivative(Complex z, int l) const {
  if (l == 0) return evaluator(z);
  constexpr int kNodes = 64;
  constexpr double kRadius = 0.1;
  Complex sum = 0.0;
  for (int k = 0; k < kNodes; ++k) {
    const double theta = 2.0 * kPi * k / kNodes;
    const Complex e = std::polar(1.0, theta);
    sum += evaluator(z + kRadius * e) * std::polar(1.0, -l * theta);
  }
  return std::tgamma(l + 1.0) / (std::pow(kRadius, l) * kNodes) * sum;
}

TestProfile TestProfile::scaled(double factor) const {
  TestProfile out = *this;
  out.identifier = identifier + "*" + std::to_string(factor);
  out.evaluator = [f = evaluator, factor](Complex z) { return factor * f(z); };
  return out;
}

TestProfile gaussian_profile() {
  TestProfile p;
  p.identifier = "gaussian";
  p.evaluator = [](Complex z) { return std::exp(z * z - 4.0); };
  p.strip_half_width = 4.0;
  // faster than any power on the strip; the order recorded is the one the checks rely on
  p.decay_order = 8;
  return p;
}

Estimate<Complex> mellin_transform(const std::function<Complex(double)>& w, Complex z, const QuadratureSpec& q) {
  auto h = [&](double t) -> Complex { return std::exp(z * t) * w(std::exp(t)); };
  Estimate<Complex> out = integrate_outward(h, 0.0, -1.0, 2.0, q.rel_tol, q.abs_tol);
  out += integrate_outward(h, 0.0, 1.0, 2.0, q.rel_tol, q.abs_tol);
  return out;
}

Estimate<Complex> inverse_mellin(const TestProfile& phi, double x, double c, const QuadratureSpec& q) {
  check_contour(phi, c);
  if (!(x > 0.0)) throw std::invalid_argument("inverse_mellin needs x > 0");
  const double lx = std::log(x);
  auto g = [&](double t) -> Complex {
    const Complex w(c, t);
    return std::exp(-w * lx) * phi(w) / (2.0 * kPi);
  };
  Estimate<Complex> out = integrate_outward(g, 0.0, -1.0, 1.0, q.rel_tol, q.abs_tol);
  out += integrate_outward(g, 0.0, 1.0, 1.0, q.rel_tol, q.abs_tol);
  return out;
}

TabulatedInverseMellin::TabulatedInverseMellin(const TestProfile& phi, double c, double log_range, double step,
                                               const QuadratureSpec& q)
    : lo_(-log_range), step_(step) {
  check_contour(phi, c);
  const auto n = static_cast<std::size_t>(std::lround(2.0 * log_range / step)) + 1;
  for (auto& column : table_) column.resize(n);
  // Far from x = 1 the transform is exponentially small and the contour at c
  // only resolves it to rounding level, so each node moves to the vertical
  // line where |x^(-w) phi(w)| is smallest on the real axis.
  const double limit = phi.strip_half_width - 0.25;
  std::vector<double> lines{c};
  for (int k = 0; k <= 32; ++k) lines.push_back(-limit + 2.0 * limit * k / 32.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double L = lo_ + step_ * static_cast<double>(j);
    double line = c;
    double best = std::log(std::abs(phi(c))) - c * L;
    for (double cand : lines) {
      const double m = std::log(std::abs(phi(cand))) - cand * L;
      if (m < best - 1.0) {
        best = m;
        line = cand;
      }
    }
    auto g = [&](double t) -> Moments {
      const Complex w(line, t);
      Moments out;
      out.m[0] = std::exp(-w * L) * phi(w) / (2.0 * kPi);
      for (int k = 1; k < kMoments; ++k) out.m[k] = -w * out.m[k - 1];
      return out;
    };
    Moments total = integrate_outward(g, 0.0, -1.0, 1.0, q.rel_tol, q.abs_tol).value;
    total += integrate_outward(g, 0.0, 1.0, 1.0, q.rel_tol, q.abs_tol).value;
    for (int k = 0; k < kMoments; ++k) table_[k][j] = total.m[k];
  }
}

bool TabulatedInverseMellin::locate(double x, std::size_t& i, double& u) const {
  const double pos = (std::log(x) - lo_) / step_;
  if (!(pos >= 0.0) || pos >= static_cast<double>(table_[0].size() - 1)) return false;
  i = static_cast<std::size_t>(pos);
  u = pos - static_cast<double>(i);
  return true;
}

Complex TabulatedInverseMellin::interpolate(int k, std::size_t i, double u) const {
  const Complex left[3] = {table_[k][i], table_[k + 1][i], table_[k + 2][i]};
  const Complex right[3] = {table_[k][i + 1], table_[k + 1][i + 1], table_[k + 2][i + 1]};
  return hermite5(left, right, step_, u);
}

Complex TabulatedInverseMellin::value(double x) const {
  std::size_t i;
  double u;
  if (!locate(x, i, u)) return 0.0;
  return interpolate(0, i, u);
}

Complex TabulatedInverseMellin::first(double x) const {
  std::size_t i;
  double u;
  if (!locate(x, i, u)) return 0.0;
  return interpolate(1, i, u) / x;
}

Complex TabulatedInverseMellin::second(double x) const {
  std::size_t i;
  double u;
  if (!locate(x, i, u)) return 0.0;
  return (interpolate(2, i, u) - interpolate(1, i, u)) / (x * x);
}

HalfLineFunction TabulatedInverseMellin::as_half_line() const {
  HalfLineFunction out;
  out.value = [this](double x) { return value(x); };
  out.first = [this](double x) { return first(x); };
  out.second = [this](double x) { return second(x); };
  return out;
}

double dirac_pairing_check(Complex alpha, int l, const TestProfile& phi, const QuadratureSpec& q) {
  if (l < 0) throw std::invalid_argument("dirac_pairing_check needs l >= 0");
  const double ra = alpha.real();
  if (!(phi.strip_half_width > std::max(2.0 * std::abs(ra) + 1.5, std::abs(ra) + 1.0)))
    throw std::invalid_argument("profile strip too narrow for this alpha");
  const double limit = phi.strip_half_width - 0.25;
  const double c1 = std::clamp(ra + 0.5, -limit, limit);
  const double c2 = std::clamp(ra + 1.5, -limit, limit);
  const QuadratureSpec inner = q.tightened(0.01);
  auto integrand = [&](double t, double c) -> Complex {
    const Complex weight = std::exp((alpha + 1.0) * t) * std::pow(t, l);
    return weight * inverse_mellin(phi, std::exp(t), c, inner).value;
  };
  const Complex below = integrate_outward([&](double t) { return integrand(t, c1); }, 0.0, -1.0, 1.0, q.rel_tol, q.abs_tol).value;
  const Complex above = integrate_outward([&](double t) { return integrand(t, c2); }, 0.0, 1.0, 1.0, q.rel_tol, q.abs_tol).value;
  const Complex expected = phi.derivative(alpha + 1.0, l);
  return std::abs(below + above - expected) / std::abs(expected);
}

double mellin_magic_check(const Order& order, const TestProfile& phi, Complex z, const QuadratureSpec& q) {
  const double s = order.s();
  const double lo = std::max(0.0, 2.0 * s - 1.0) + 0.05;
  const double hi = 2.0 * s - 0.05;
  if (!(z.real() > lo && z.real() < hi)) throw std::invalid_argument("mellin_magic_check needs Re z inside the admissible window");
  const TabulatedInverseMellin v(phi, 0.5, 40.0, 0.01, q.tightened(0.01));
  const HalfLineFunction u = v.as_half_line();
  QuadratureSpec inner = q;
  inner.rel_tol = std::max(q.rel_tol, 1e-9);
  QuadratureSpec outer = q;
  outer.rel_tol = std::max(q.rel_tol, 1e-7);
  auto lv = [&](double x) -> Complex { return apply_L(order, u, x, inner).value; };
  const Complex lhs = mellin_transform(lv, z, outer).value;
  const Complex rhs = f_symbol(order, z - 1.0).value * phi(z - 2.0 * s);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

PlancherelReport plancherel_check(const std::function<double(double)>& u, const TestProfile& phi,
                                  const QuadratureSpec& q) {
  PlancherelReport r;
  const QuadratureSpec inner = q.tightened(0.01);
  auto xs = [&](double x) -> Complex { return u(x) * inverse_mellin(phi, x, 0.5, inner).value; };
  r.x_side = mellin_transform(xs, 1.0, q).value;
  auto wrapped = [&](double x) -> Complex { return Complex(u(x), 0.0); };
  auto line = [&](double t) -> Complex {
    const Complex w(0.5, t);
    return mellin_transform(wrapped, w, inner).value * std::conj(phi(w)) / (2.0 * kPi);
  };
  r.line_side = integrate_outward(line, 0.0, -1.0, 1.0, q.rel_tol, q.abs_tol).value +
                integrate_outward(line, 0.0, 1.0, 1.0, q.rel_tol, q.abs_tol).value;
  r.defect = std::abs(r.x_side - r.line_side) / std::abs(r.x_side);
  return r;
}

}  // namespace fneumann
