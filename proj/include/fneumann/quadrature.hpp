#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "fneumann/errors.hpp"

namespace fneumann {

/// Tolerances and geometric parameters shared by every quadrature-backed
/// routine (kernel evaluation, operator application, Mellin transforms).
struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// Radius of the symmetric principal-value pairing, as a fraction of the
  /// distance to the boundary point 0.
  double singular_split_radius = 0.5;
  /// Upper cutoff T for half-line integrals before the analytic tail is added.
  double domain_truncation = 100.0;
  bool tail_exponent_correction = true;
  std::size_t max_intervals = 4000;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  /// Same spec with rel_tol (and abs_tol) scaled by `factor`.
  QuadratureSpec tightened(double factor) const;
};

template <class T>
struct Estimate {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;

  Estimate& operator+=(const Estimate& other) {
    value += other.value;
    error += other.error;
    evaluations += other.evaluations;
    return *this;
  }
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gauss_kronrod(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  using std::abs;
  return {a, b, kronrod * h, abs((kronrod - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// The hardest segment is bisected until the summed error estimate falls
/// below max(abs_tol, rel_tol * |integral|).
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol, double abs_tol,
               std::size_t max_intervals = 4000) {
  using T = std::decay_t<decltype(f(a))>;
  Estimate<T> out;
  if (a == b) return out;
  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::gauss_kronrod<T>(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  std::size_t evaluations = 15;
  using std::abs;
  while (err > std::max(abs_tol, rel_tol * abs(total))) {
    if (heap.size() >= max_intervals) {
      throw QuadratureNotConverged("adaptive quadrature exceeded " + std::to_string(max_intervals) +
                                   " intervals on [" + std::to_string(a) + ", " + std::to_string(b) +
                                   "], error " + std::to_string(err));
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod<T>(f, worst.a, mid);
    auto right = detail::gauss_kronrod<T>(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (!std::isfinite(err)) throw QuadratureNotConverged("non-finite integrand");
  }
  // Recompute the sums from the leaves to shed accumulated rounding.
  T value{};
  double error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.evaluations = evaluations;
  return out;
}

/// Integrates f from `start` towards +infinity (direction > 0) or -infinity
/// (direction < 0) in chunks whose width starts at `chunk` and grows by
/// `growth`, stopping once two consecutive chunks contribute below the
/// tolerance. The result is the positively oriented integral over the covered
/// half-line. Intended for integrands that decay exponentially in the
/// integration variable (log-scale substitutions).
/// Throws DivergentStrip when the chunk density keeps growing.
template <class F>
auto integrate_outward(F&& f, double start, double direction, double chunk, double rel_tol,
                       double abs_tol, std::size_t max_chunks = 200, double growth = 1.25) {
  using T = std::decay_t<decltype(f(start))>;
  Estimate<T> total;
  int quiet = 0;
  int growing = 0;
  double previous = -1.0;
  double a = start;
  double width = chunk;
  const double sign = direction > 0 ? 1.0 : -1.0;
  for (std::size_t k = 0; k < max_chunks; ++k) {
    const double b = a + sign * width;
    auto piece = integrate(f, std::min(a, b), std::max(a, b), rel_tol, 0.1 * abs_tol);
    total += piece;
    using std::abs;
    const double mag = abs(piece.value);
    if (mag <= std::max(abs_tol, rel_tol * abs(total.value))) {
      if (++quiet >= 2) break;
    } else {
      quiet = 0;
    }
    const double density = mag / width;
    if (previous >= 0.0 && density > previous && mag > abs_tol) {
      if (++growing >= 6) throw DivergentStrip("integrand does not decay along the truncated direction");
    } else {
      growing = 0;
    }
    previous = density;
    a = b;
    width *= growth;
    if (k + 1 == max_chunks) throw QuadratureNotConverged("outward integration did not settle within the chunk budget");
  }
  return total;
}

/// Integral over [T, infinity) of  amplitude * y^p * (y + a)^(-q), |a| < T,
/// by termwise integration of the binomial series in a / y. For Re(p) >= q - 1
/// the result is the analytic continuation of the convergent case.
std::complex<double> power_law_tail(std::complex<double> amplitude, std::complex<double> p, double q,
                                    double a, double T);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace fneumann
