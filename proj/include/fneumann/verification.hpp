#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fneumann/neumann_symbols.hpp"

namespace fneumann {

struct CheckResult {
  std::string suite;
  std::string name;
  double defect = 0.0;
  double threshold = 0.0;

  bool passed() const { return defect <= threshold; }
};

/// Gamma and digamma invariants: recurrence, reflection, conjugation and the
/// Stirling modulus at |Im z| = 40 (within 2%).
std::vector<CheckResult> verify_special_functions(std::uint64_t seed = 20240611);

/// Identities of the symbol on `samples` random beta (poles avoided by 1e-3):
/// both printed forms of f, f(beta) = f(2s - 1 - beta), conjugation,
/// F = -(2s - beta) sin(pi s) g and the ratio of f2 to f.
std::vector<CheckResult> verify_symbols(const Order& order, int samples = 200, std::uint64_t seed = 2024);

/// Quadrature oracles: L(x^beta)(1) against f on the real grid
/// (max(0, 2s-1) + 0.05, 2s - 0.05) step 0.1, the row integral of the
/// half-line correction kernel against c_s / (2s), and self-adjointness at
/// `selfadjoint_beta` (default s + 0.1 when below 2s, else s).
std::vector<CheckResult> verify_kernel(const Order& order, std::optional<double> selfadjoint_beta = std::nullopt);

/// Mellin machinery on exp(z^2 - 4): inversion round trip, Dirac pairings at
/// alpha = 0 and 0.4 + 0.9i and the l = 1 log moment at alpha = 0.2, the
/// operator identity at `magic_z` (default: middle of its admissible window)
/// and the Plancherel pairing with e^-x.
std::vector<CheckResult> verify_mellin(const Order& order, std::optional<double> magic_z = std::nullopt);

}  // namespace fneumann
