#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fneumann/neumann_symbols.hpp"

namespace fneumann {

struct Disc {
  Complex center;
  double radius;
};

/// Axis-parallel rectangle in the beta plane plus discs whose zeros are ignored.
struct StripWindow {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
  std::vector<Disc> exclusions;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z, double slack = 0.0) const;
  /// Throws std::invalid_argument for an empty rectangle.
  void validate() const;
  /// As above, and additionally requires re_max <= 2s + 1 - 1e-6 where F is holomorphic.
  void validate(const Order& order) const;
};

struct ZeroRecord {
  Complex beta;
  int multiplicity = 1;
  double newton_residual = 0.0;
  StripWindow enclosing_box;
  bool certified = false;
};

struct WindingReport {
  int winding = 0;
  std::size_t boundary_samples = 0;
  /// Number of jitter steps applied before the boundary was clear of zeros.
  int jitter_steps = 0;
  StripWindow box_used;
};

/// |(2s - beta) sin(pi (s - beta))| + |sin(pi s) Gamma(2s+1-beta) Gamma(beta+1) / Gamma(2s)|,
/// the size of the two terms of F that cancel at a zero.
double F_scale(const Order& order, Complex beta);

/// Discs of radius 0.02 around the trivial zeros 0 and 2s - 1.
std::vector<Disc> trivial_exclusions(const Order& order);
bool is_trivial_zero(const Order& order, Complex beta, double radius = 0.02);

/// Winding number of fn around the rectangle's boundary by phase tracking.
/// Samples are refined until neighbouring phase increments stay below pi/2,
/// and the count is repeated with half the initial step as a guard. A sample
/// with |fn| < 1e-12 scale raises ZeroOnBoundary; winding_report then moves
/// the rectangle by 1e-4 of its size (right and down) and tries again.
WindingReport winding_report(const std::function<Complex(Complex)>& fn, const std::function<double(Complex)>& scale,
                             const StripWindow& box);
WindingReport winding_report(const Order& order, const StripWindow& box);
int winding_number(const Order& order, const StripWindow& box);

/// Quadtree isolation of the zeros of F in the window, Newton refinement and
/// certification by a winding-1 box of half-width at most 5e-7. Zeros in an
/// exclusion disc are dropped. Results have Im >= 0 and are sorted by (Re, Im).
std::vector<ZeroRecord> isolate_zeros(const Order& order, const StripWindow& window, std::size_t max_boxes = 20000);

/// Real zeros of F on [lo, hi] from sign changes on a uniform grid, refined by bisection.
/// Trivial zeros are included; use is_trivial_zero to tell them apart.
std::vector<double> real_zero_scan(const Order& order, double lo, double hi, std::size_t samples = 4000);

/// Height beyond which g has no zeros for 0 < Re beta < re_max, from
/// A1 A2 / (min(1, Gamma(2s)) |b|) < (e^(pi |b|) - 1) / (2 sin(pi s)).
/// The default re_max is 2s + 1/2.
double tail_bound_M(const Order& order);
double tail_bound_M(const Order& order, double re_max);

struct B0Result {
  double s = 0.0;
  double B0 = 0.0;
  ZeroRecord witness;
  bool real_zero = false;
  double lower_theory = 0.0;
  double upper_theory = 0.0;
  bool within_theory = false;
  double tail_M = 0.0;
};

/// Real part of the first nontrivial zero of F with Re beta > max(0, 2s - 1).
/// Throws NoZeroFound when the search window holds none.
B0Result compute_B0(const Order& order);

enum class Endpoint { zero, one };

/// Leading-order location of the first zero: 3s as s -> 0 (needs s <= 0.1),
/// 2 + i sqrt(2(1-s)) - 3(1-s) as s -> 1 (needs s >= 0.9).
Complex asymptotic_estimate(const Order& order, Endpoint endpoint);

/// Smallest root in the upper half-plane of sin(2 pi beta) = 2 pi beta with 1 <= Re <= 1.5,
/// which is where F vanishes for s = 1/2.
Complex solve_s_half_special();

}  // namespace fneumann
