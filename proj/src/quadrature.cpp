#include "fneumann/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace fneumann {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("quadrature tolerances must be positive");
  if (!(singular_split_radius > 0.0 && singular_split_radius < 1.0))
    throw std::invalid_argument("singular_split_radius must lie in (0, 1)");
  if (!(domain_truncation >= 100.0)) throw std::invalid_argument("domain_truncation must be at least 100");
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec q = *this;
  q.rel_tol *= factor;
  q.abs_tol *= factor;
  return q;
}

std::complex<double> power_law_tail(std::complex<double> amplitude, std::complex<double> p, double q,
                                    double a, double T) {
  if (!(std::abs(a) < T)) throw std::invalid_argument("power_law_tail needs |a| < T");
  // (y + a)^(-q) = y^(-q) sum_k binom(-q, k) (a / y)^k
  const std::complex<double> lead = p - q + 1.0;
  const std::complex<double> scale = std::pow(T, lead);
  const double ratio = a / T;
  std::complex<double> sum = 0.0;
  double binom = 1.0;
  double rpow = 1.0;
  for (int k = 0; k < 200; ++k) {
    const std::complex<double> expo = lead - static_cast<double>(k);
    const std::complex<double> term = binom * rpow / (-expo);
    sum += term;
    if (k > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    binom *= (-q - static_cast<double>(k)) / static_cast<double>(k + 1);
    rpow *= ratio;
  }
  sum *= scale;
  return amplitude * sum;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace fneumann
