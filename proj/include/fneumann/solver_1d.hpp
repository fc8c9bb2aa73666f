#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fneumann/neumann_symbols.hpp"
#include "fneumann/quadrature.hpp"

namespace fneumann {

/// Mesh of (0, 1) graded symmetrically towards both endpoints:
/// x_j = (2 j / N)^grading / 2 on the left half, mirrored on the right.
struct GradedMesh {
  std::vector<double> nodes;
  double grading = 3.0;

  std::size_t cells() const { return nodes.size() - 1; }
  double midpoint(std::size_t i) const { return 0.5 * (nodes[i] + nodes[i + 1]); }
  double width(std::size_t i) const { return nodes[i + 1] - nodes[i]; }
  Eigen::VectorXd midpoints() const;
  Eigen::VectorXd widths() const;
};

/// Throws InsufficientResolution for fewer than 16 cells and
/// std::invalid_argument for grading < 1.
GradedMesh graded_mesh(std::size_t cells, double grading = 3.0);

/// Cell values of a piecewise-constant field.
struct SolverField {
  GradedMesh mesh;
  Eigen::VectorXd values;
  bool mean_zero = false;

  double mean() const;
};

/// Matrix of the regional operator L_Omega on (0, 1) acting on piecewise-constant
/// fields. Entry (i, j) integrates the kernel over cell j from the midpoint of
/// cell i, then w_i A_ij and w_j A_ji are replaced by their mean so that W A is
/// symmetric. Rows sum to zero.
Eigen::MatrixXd assemble_operator(const Order& order, const GradedMesh& mesh, const QuadratureSpec& q = {});

/// k_Omega(x, y) for x, y in (0, 1) by direct quadrature over the exterior.
double regional_correction(const Order& order, double x, double y, const QuadratureSpec& q = {});

/// max |W A - (W A)^T| / max |W A| with W = diag(cell widths).
double symmetry_defect(const Eigen::MatrixXd& a, const GradedMesh& mesh);

struct SolveDiagnostics {
  /// |sum h_i w_i| of the source before projection
  double source_mean = 0.0;
  bool projected = false;
  /// ||A u - h'||_inf / ||h'||_inf, h' the compatible source
  double residual = 0.0;
};

/// Factorises the bordered Neumann system once; solve() may then be called
/// for many sources. The left null vector of A is the vector of cell widths,
/// so the compatible part of a source is the source minus its mean.
class NeumannSolver {
 public:
  NeumannSolver(const Order& order, const GradedMesh& mesh, const QuadratureSpec& q = {});

  SolverField solve(const std::function<double(double)>& h, SolveDiagnostics* diagnostics = nullptr) const;
  SolverField solve(const Eigen::VectorXd& h, SolveDiagnostics* diagnostics = nullptr) const;

  const Eigen::MatrixXd& matrix() const { return a_; }
  const GradedMesh& mesh() const { return mesh_; }
  /// Left null vector of A normalised to sum 1.
  const Eigen::VectorXd& left_null_vector() const { return left_null_; }

 private:
  GradedMesh mesh_;
  Eigen::MatrixXd a_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd left_null_;
  Eigen::VectorXd scale_;
};

/// One-shot solve: mean-zero field for L_Omega u = h. Throws SingularSystem
/// when the null space of the matrix is not the constants.
SolverField solve_neumann(const Order& order, const std::function<double(double)>& h, const GradedMesh& mesh,
                          SolveDiagnostics* diagnostics = nullptr);

enum class Side { left, right };

struct ExponentFit {
  double exponent = 0.0;
  /// coefficient of determination of the final regression
  double r2 = 0.0;
  bool linear_term = false;
  std::size_t points = 0;
};

/// Power p in u(x) ~ c0 + c1 d + C d^p, d the distance to the endpoint, from
/// the cells with d in [1e-4, 1e-1]. The linear term is fitted only when the
/// fit without it gives p > 1. Throws InsufficientResolution below 8 cells in the band.
ExponentFit fit_boundary_exponent(const SolverField& u, Side side);

/// |u(x1) - u(x0)| / (x1 - x0) for the first two mesh nodes in the fitting band,
/// node values interpolated from the neighbouring cells, relative to
/// (max u - min u), the field's gradient scale over the unit interval.
double normal_derivative_check(const SolverField& u, Side side);

enum class ResidualOperator { neumann, dirichlet };

/// max over points of |L(x^beta)(x)| / (x^(Re beta - 2s) scale) where scale is the
/// size of the terms that cancel in the symbol. The Neumann case allows
/// Re beta > 2s through the continued tails of apply_L_power.
double oscillatory_residual(const Order& order, Complex beta, const std::vector<double>& points,
                            ResidualOperator op = ResidualOperator::neumann, const QuadratureSpec& q = {});

}  // namespace fneumann
