#pragma once

#include <complex>

#include "fneumann/errors.hpp"

namespace fneumann {

/// Distance below which an argument is treated as sitting on a Gamma pole.
inline constexpr double kGammaPoleTolerance = 1e-12;

/// True when z is within `tol` of one of 0, -1, -2, ...
bool near_nonpositive_integer(Complex z, double tol = kGammaPoleTolerance);

/// sin(pi x) and cos(pi x) for real x, exact at integers and half-integers.
double sin_pi(double x);
double cos_pi(double x);

/// sin(pi z), cos(pi z). Both grow like exp(pi |Im z|) / 2.
Complex sin_pi(Complex z);
Complex cos_pi(Complex z);

/// log(sin(pi z)) evaluated without forming sin itself, so it stays finite
/// for |Im z| far beyond the overflow threshold of sinh. Branch is arbitrary
/// (only exp of the result is meaningful).
Complex log_sin_pi(Complex z);

/// cot(pi z), stable for large |Im z|.
Complex cot_pi(Complex z);

/// Gamma function via a Lanczos approximation (g = 7, 9 terms) for
/// Re z >= 1/2 and the reflection formula below that.
/// Throws PoleAt within kGammaPoleTolerance of a non-positive integer.
Complex complex_gamma(Complex z);

/// log Gamma(z). For Re z >= 1/2 this is the branch that is continuous along
/// vertical lines and real on the positive axis.
Complex complex_log_gamma(Complex z);

/// Digamma psi(z) = Gamma'(z) / Gamma(z): recurrence up to Re z >= 8, then the
/// Bernoulli asymptotic series; reflection for Re z < 1/2.
Complex digamma(Complex z);

}  // namespace fneumann
