#include "fneumann/solver_1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fneumann/kernel_quadrature.hpp"

namespace fneumann {

namespace {

// (a + d)^(-2s) - (a + w + d)^(-2s), without cancellation for small w.
double power_drop(double two_s, double near, double w) {
  return std::pow(near, -two_s) * -std::expm1(-two_s * std::log1p(w / near));
}

// 2s / (d^(-2s) - (1 + d)^(-2s)), the reciprocal exterior density at distance d.
double exterior_weight(double two_s, double d) { return two_s / power_drop(two_s, d, 1.0); }

struct LogRule {
  std::vector<double> d;
  std::vector<double> weight;
};

// Composite Gauss-Legendre in log d over [d_min, d_max]; panels widen where the
// integrand is a pure power of d.
LogRule log_rule(double two_s, double d_min, std::size_t order) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double fine = 0.5;
  const double coarse = std::max(fine, 0.25 / two_s);
  const double top = std::log(1e3) + 40.0 / two_s;
  LogRule rule;
  double a = std::log(d_min);
  while (a < top) {
    const double width = a < std::log(1e3) ? fine : coarse;
    const double b = a + width;
    for (std::size_t k = 0; k < order; ++k) {
      const double l = a + 0.5 * width * (x[k] + 1.0);
      const double d = std::exp(l);
      rule.d.push_back(d);
      rule.weight.push_back(0.5 * width * w[k] * d);
    }
    a = b;
  }
  return rule;
}

// Contribution of one exterior half-line to the k_Omega cell integrals, as
// seen from the endpoint at distance `dist` of the midpoints and `lo`/`hi` of the cell edges.
Eigen::MatrixXd exterior_block(double s, double c_s, const LogRule& rule, const Eigen::VectorXd& dist,
                               const Eigen::VectorXd& lo, const Eigen::VectorXd& width) {
  const double two_s = 2.0 * s;
  const Eigen::Index n = dist.size();
  const Eigen::Index m = static_cast<Eigen::Index>(rule.d.size());
  Eigen::MatrixXd p(n, m), q(m, n);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double d = rule.d[static_cast<std::size_t>(k)];
    const double outer = c_s * rule.weight[static_cast<std::size_t>(k)] * exterior_weight(two_s, d) / two_s;
    for (Eigen::Index i = 0; i < n; ++i) p(i, k) = outer * std::pow(dist[i] + d, -1.0 - two_s);
    for (Eigen::Index j = 0; j < n; ++j) q(k, j) = power_drop(two_s, lo[j] + d, width[j]);
  }
  return p * q;
}

std::vector<std::size_t> band_cells(const SolverField& u, Side side) {
  std::vector<std::size_t> cells;
  const auto& mesh = u.mesh;
  const std::size_t n = mesh.cells();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = side == Side::left ? k : n - 1 - k;
    const double d = side == Side::left ? mesh.midpoint(i) : 0.5 * ((1.0 - mesh.nodes[i]) + (1.0 - mesh.nodes[i + 1]));
    if (d > 1e-1) break;
    if (d >= 1e-4) cells.push_back(i);
  }
  if (cells.size() < 8) throw InsufficientResolution("fewer than 8 cells with distance to the endpoint in [1e-4, 1e-1]");
  return cells;
}

double endpoint_distance(const GradedMesh& mesh, std::size_t i, Side side) {
  return side == Side::left ? mesh.midpoint(i) : 0.5 * ((1.0 - mesh.nodes[i]) + (1.0 - mesh.nodes[i + 1]));
}

struct ModelFit {
  double residual = std::numeric_limits<double>::infinity();
  double exponent = 0.0;
  double frequency = 0.0;
  double total = 0.0;
};

// Weighted least squares of u against 1, [d], d^p cos(b log d), d^p sin(b log d)
// for fixed (p, b); returns the weighted residual sum of squares.
double projected_residual(const Eigen::VectorXd& d, const Eigen::VectorXd& u, const Eigen::VectorXd& wt, double p,
                          double b, bool linear) {
  const Eigen::Index n = d.size();
  const int cols = 1 + (linear ? 1 : 0) + (b == 0.0 ? 1 : 2);
  Eigen::MatrixXd x(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    int c = 0;
    x(i, c++) = wt[i];
    if (linear) x(i, c++) = wt[i] * d[i];
    const double lead = wt[i] * std::pow(d[i], p);
    if (b == 0.0) {
      x(i, c++) = lead;
    } else {
      const double phase = b * std::log(d[i]);
      x(i, c++) = lead * std::cos(phase);
      x(i, c++) = lead * std::sin(phase);
    }
  }
  const Eigen::VectorXd rhs = wt.cwiseProduct(u);
  const Eigen::VectorXd coef = x.colPivHouseholderQr().solve(rhs);
  return (x * coef - rhs).squaredNorm();
}

ModelFit fit_model(const Eigen::VectorXd& d, const Eigen::VectorXd& u, const Eigen::VectorXd& spacing, bool linear) {
  double weight_power = 0.0;
  ModelFit best;
  for (int iteration = 0; iteration < 12; ++iteration) {
    Eigen::VectorXd wt(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) wt[i] = std::pow(d[i], -weight_power) * spacing[i];
    ModelFit round;
    auto consider = [&](double p, double b) {
      const double r = projected_residual(d, u, wt, p, b, linear);
      if (r < round.residual) {
        round.residual = r;
        round.exponent = p;
        round.frequency = b;
      }
    };
    for (double p = 0.02; p <= 3.0 + 1e-9; p += 0.02) {
      consider(p, 0.0);
      for (double b = 0.05; b <= 2.0 + 1e-9; b += 0.05) consider(p, b);
    }
    const double p0 = round.exponent;
    const double b0 = round.frequency;
    for (double p = p0 - 0.02; p <= p0 + 0.02 + 1e-12; p += 0.001) {
      if (p <= 0.0) continue;
      if (b0 == 0.0) {
        consider(p, 0.0);
      } else {
        for (double b = std::max(0.005, b0 - 0.05); b <= b0 + 0.05 + 1e-12; b += 0.005) consider(p, b);
      }
    }
    const Eigen::VectorXd wu = wt.cwiseProduct(u);
    const double mean = wu.sum() / wt.sum();
    round.total = (wt.cwiseProduct(u.array().matrix() - Eigen::VectorXd::Constant(u.size(), mean))).squaredNorm();
    const bool settled = std::abs(round.exponent - weight_power) < 1e-3;
    best = round;
    if (settled) break;
    weight_power = round.exponent;
  }
  return best;
}

}  // namespace

Eigen::VectorXd GradedMesh::midpoints() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(cells()));
  for (std::size_t i = 0; i < cells(); ++i) out[static_cast<Eigen::Index>(i)] = midpoint(i);
  return out;
}

Eigen::VectorXd GradedMesh::widths() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(cells()));
  for (std::size_t i = 0; i < cells(); ++i) out[static_cast<Eigen::Index>(i)] = width(i);
  return out;
}

GradedMesh graded_mesh(std::size_t cells, double grading) {
  if (cells < 16) throw InsufficientResolution("the graded mesh needs at least 16 cells");
  if (!(grading >= 1.0)) throw std::invalid_argument("grading exponent must be at least 1");
  GradedMesh mesh;
  mesh.grading = grading;
  mesh.nodes.resize(cells + 1);
  const double n = static_cast<double>(cells);
  for (std::size_t j = 0; j <= cells; ++j) {
    const std::size_t k = std::min(j, cells - j);
    const double edge = 0.5 * std::pow(2.0 * static_cast<double>(k) / n, grading);
    mesh.nodes[j] = 2 * j <= cells ? edge : 1.0 - edge;
  }
  mesh.nodes.front() = 0.0;
  mesh.nodes.back() = 1.0;
  return mesh;
}

double SolverField::mean() const { return values.dot(mesh.widths()); }

Eigen::MatrixXd assemble_operator(const Order& order, const GradedMesh& mesh, const QuadratureSpec& q) {
  q.validate();
  const std::size_t cells = mesh.cells();
  if (cells < 16) throw InsufficientResolution("assemble_operator needs at least 16 cells");
  const double s = order.s();
  const double two_s = 2.0 * s;
  const double c_s = order.c1();
  const Eigen::Index n = static_cast<Eigen::Index>(cells);

  Eigen::VectorXd x = mesh.midpoints(), w = mesh.widths();
  Eigen::VectorXd left_lo(n), right_dist(n), right_lo(n);
  double smallest = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    left_lo[i] = mesh.nodes[k];
    right_lo[i] = 1.0 - mesh.nodes[k + 1];
    right_dist[i] = 0.5 * ((1.0 - mesh.nodes[k]) + (1.0 - mesh.nodes[k + 1]));
    smallest = std::min({smallest, x[i], right_dist[i]});
  }

  const LogRule rule = log_rule(two_s, 1e-10 * smallest, q.rel_tol < 1e-12 ? 12 : 8);
  Eigen::MatrixXd a = exterior_block(s, c_s, rule, x, left_lo, w) + exterior_block(s, c_s, rule, right_dist, right_lo, w);

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto kj = static_cast<std::size_t>(j);
      const double near = j > i ? mesh.nodes[kj] - x[i] : x[i] - mesh.nodes[kj + 1];
      a(i, j) += c_s / two_s * power_drop(two_s, near, w[j]);
    }
  }

  // pairwise weights w_i A_ij averaged with w_j A_ji, so that W A is symmetric
  const Eigen::MatrixXd pair = w.asDiagonal() * a;
  a = w.cwiseInverse().asDiagonal() * (0.5 * (pair + pair.transpose()));
  Eigen::MatrixXd m = -a;
  for (Eigen::Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row += a(i, j);
    m(i, i) = row;
  }
  return m;
}

double regional_correction(const Order& order, double x, double y, const QuadratureSpec& q) {
  q.validate();
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) throw std::invalid_argument("regional_correction needs x, y in (0, 1)");
  const double two_s = 2.0 * order.s();
  auto integrand = [&](double l) {
    const double d = std::exp(l);
    const double left = std::pow((x + d) * (y + d), -1.0 - two_s);
    const double right = std::pow((1.0 - x + d) * (1.0 - y + d), -1.0 - two_s);
    return (left + right) * exterior_weight(two_s, d) * d;
  };
  std::vector<double> breaks = {std::log(x), std::log(y), std::log(1.0 - x), std::log(1.0 - y), 0.0};
  std::sort(breaks.begin(), breaks.end());
  const double tol = q.rel_tol;
  double middle = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
    middle += integrate(integrand, breaks[k], breaks[k + 1], tol, 0.0, q.max_intervals).value;
  const auto up = integrate_outward(integrand, breaks.back(), 1.0, 1.0, tol, 0.0, 400);
  const auto down = integrate_outward(integrand, breaks.front(), -1.0, 1.0, tol, 0.0, 400);
  return order.c1() * (middle + up.value + down.value);
}

double symmetry_defect(const Eigen::MatrixXd& a, const GradedMesh& mesh) {
  const Eigen::MatrixXd wa = mesh.widths().asDiagonal() * a;
  return (wa - wa.transpose()).cwiseAbs().maxCoeff() / wa.cwiseAbs().maxCoeff();
}

NeumannSolver::NeumannSolver(const Order& order, const GradedMesh& mesh, const QuadratureSpec& q)
    : mesh_(mesh), a_(assemble_operator(order, mesh, q)) {
  const Eigen::Index n = a_.rows();
  const Eigen::VectorXd w = mesh_.widths();
  // W A is symmetric, so the system is solved in the form W A u = W h after
  // scaling by its diagonal; the bordering row fixes the weighted mean.
  const Eigen::MatrixXd form = w.asDiagonal() * a_;
  scale_ = form.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd bordered = Eigen::MatrixXd::Zero(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = scale_.asDiagonal() * form * scale_.asDiagonal();
  const Eigen::VectorXd column = scale_.cwiseInverse().normalized();
  const Eigen::VectorXd row = scale_.cwiseProduct(w).normalized();
  bordered.topRightCorner(n, 1) = column;
  bordered.bottomLeftCorner(1, n) = row.transpose();
  lu_.compute(bordered);
  if (lu_.rank() < n + 1) throw SingularSystem("the null space of the Neumann matrix is larger than the constants");
  left_null_ = w / w.sum();
}

SolverField NeumannSolver::solve(const std::function<double(double)>& h, SolveDiagnostics* diagnostics) const {
  const Eigen::VectorXd x = mesh_.midpoints();
  Eigen::VectorXd values(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) values[i] = h(x[i]);
  return solve(values, diagnostics);
}

SolverField NeumannSolver::solve(const Eigen::VectorXd& h, SolveDiagnostics* diagnostics) const {
  const Eigen::Index n = a_.rows();
  if (h.size() != n) throw std::invalid_argument("source size does not match the mesh");
  const double source_mean = h.dot(mesh_.widths());
  const Eigen::VectorXd compatible = h - Eigen::VectorXd::Constant(n, left_null_.dot(h));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = scale_.cwiseProduct(mesh_.widths().cwiseProduct(compatible));
  const Eigen::VectorXd sol = lu_.solve(rhs);

  SolverField out;
  out.mesh = mesh_;
  out.values = scale_.cwiseProduct(sol.head(n));
  out.mean_zero = true;
  if (diagnostics) {
    diagnostics->source_mean = std::abs(source_mean);
    diagnostics->projected = std::abs(source_mean) > 1e-10;
    const double scale = compatible.cwiseAbs().maxCoeff();
    const double defect = (a_ * out.values - compatible).cwiseAbs().maxCoeff();
    diagnostics->residual = scale > 0.0 ? defect / scale : defect;
  }
  return out;
}

SolverField solve_neumann(const Order& order, const std::function<double(double)>& h, const GradedMesh& mesh,
                          SolveDiagnostics* diagnostics) {
  return NeumannSolver(order, mesh).solve(h, diagnostics);
}

ExponentFit fit_boundary_exponent(const SolverField& u, Side side) {
  if (u.mesh.grading < 2.0) throw InsufficientResolution("exponent fitting needs a mesh graded with exponent >= 2");
  const auto cells = band_cells(u, side);
  const Eigen::Index n = static_cast<Eigen::Index>(cells.size());
  Eigen::VectorXd d(n), v(n), spacing(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto i = cells[static_cast<std::size_t>(k)];
    d[k] = endpoint_distance(u.mesh, i, side);
    v[k] = u.values[static_cast<Eigen::Index>(i)];
  }
  // equal weight per unit of log d
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lo = std::log(d[std::max<Eigen::Index>(k - 1, 0)]);
    const double hi = std::log(d[std::min<Eigen::Index>(k + 1, n - 1)]);
    spacing[k] = std::sqrt(std::abs(hi - lo) / (k == 0 || k == n - 1 ? 1.0 : 2.0));
  }
  ModelFit fit = fit_model(d, v, spacing, false);
  bool linear = false;
  if (fit.exponent > 1.0) {
    fit = fit_model(d, v, spacing, true);
    linear = true;
  }
  ExponentFit out;
  out.exponent = fit.exponent;
  out.r2 = fit.total > 0.0 ? 1.0 - fit.residual / fit.total : 1.0;
  out.linear_term = linear;
  out.points = cells.size();
  return out;
}

double normal_derivative_check(const SolverField& u, Side side) {
  const auto& mesh = u.mesh;
  const std::size_t cells = mesh.cells();
  if (static_cast<std::size_t>(u.values.size()) != cells) throw std::invalid_argument("field size does not match the mesh");
  // node values from the neighbouring cell values, linear in the midpoints
  auto node_value = [&](std::size_t k) {
    const double xl = mesh.midpoint(k - 1), xr = mesh.midpoint(k);
    const double t = (mesh.nodes[k] - xl) / (xr - xl);
    return (1.0 - t) * u.values[static_cast<Eigen::Index>(k - 1)] + t * u.values[static_cast<Eigen::Index>(k)];
  };
  std::vector<std::size_t> band;
  for (std::size_t j = 1; j < cells && band.size() < 2; ++j) {
    const std::size_t k = side == Side::left ? j : cells - j;
    const double d = side == Side::left ? mesh.nodes[k] : 1.0 - mesh.nodes[k];
    if (d > 1e-1) break;
    if (d >= 1e-4) band.push_back(k);
  }
  if (band.size() < 2) throw InsufficientResolution("fewer than two mesh nodes with distance to the endpoint in [1e-4, 1e-1]");
  const double jump = node_value(band[1]) - node_value(band[0]);
  const double range = u.values.maxCoeff() - u.values.minCoeff();
  if (range == 0.0) return 0.0;
  return std::abs(jump) / std::abs(mesh.nodes[band[1]] - mesh.nodes[band[0]]) / range;
}

double oscillatory_residual(const Order& order, Complex beta, const std::vector<double>& points, ResidualOperator op,
                            const QuadratureSpec& q) {
  if (points.empty()) throw std::invalid_argument("oscillatory_residual needs sample points");
  const double s = order.s();
  Complex symbol;
  double scale;
  if (op == ResidualOperator::neumann) {
    const Complex cb = c_beta(order, beta);
    symbol = f_symbol(order, beta).value;
    scale = std::abs(dirichlet_symbol(order, beta)) + std::abs(2.0 * s * order.c1() * cb * cb);
  } else {
    symbol = dirichlet_symbol(order, beta);
    scale = order.c1() * std::abs(c_beta(order, beta));
  }
  double worst = 0.0;
  for (double x : points) {
    if (!(x > 0.0)) throw std::invalid_argument("sample points must be positive");
    const Complex applied =
        op == ResidualOperator::neumann ? apply_L_power(order, beta, x, q).value : apply_dirichlet_power(order, beta, x, q).value;
    const Complex expected = symbol * std::pow(x, beta - 2.0 * s);
    worst = std::max(worst, std::abs(applied - expected) / (std::pow(x, beta.real() - 2.0 * s) * scale));
  }
  return worst;
}

}  // namespace fneumann
