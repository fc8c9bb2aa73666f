#pragma once

#include <optional>

#include "fneumann/errors.hpp"

namespace fneumann {

/// Distance in beta below which a symbol is reported as sitting on a pole.
inline constexpr double kSymbolPoleTolerance = 1e-9;

/// The fractional order s in (0, 1) together with its normalising constants.
class Order {
 public:
  /// Throws std::invalid_argument unless 0 < s < 1.
  explicit Order(double s);

  double s() const { return s_; }
  /// One-dimensional kernel constant c_s.
  double c1() const { return c1_; }
  /// Constant of the n-dimensional kernel.
  double c(int n) const;

 private:
  double s_;
  double c1_;
};

struct SymbolValue {
  Complex value{};
  bool is_pole = false;
  std::optional<Complex> nearest_pole;
};

enum class FForm { product, difference };

/// Gamma(2s - beta) Gamma(beta + 1) / Gamma(1 + 2s), the Mellin transform of
/// t^beta (1 + t)^(-1 - 2s) at 1.
Complex c_beta(const Order& order, Complex beta);

/// The Mellin symbol f of the half-line Neumann operator, L(x^beta) = f(beta) x^(beta - 2s).
/// Poles at 2s + j and -1 - j (j >= 0) are flagged rather than thrown.
SymbolValue f_symbol(const Order& order, Complex beta, FForm form = FForm::product);

/// g(z) = Gamma(2s - z) Gamma(z + 1) / Gamma(2s) - sin(pi (s - z)) / sin(pi s).
Complex g_aux(const Order& order, Complex z);

/// F(s, beta) = -(2s - beta) sin(pi s) g(beta), written so that it stays
/// holomorphic across beta = 2s. Valid for Re beta < 2s + 1.
Complex F_entire(const Order& order, Complex beta);
Complex dF_dbeta(const Order& order, Complex beta);

struct HalflineSymbols {
  Complex fL_plus;
  Complex fL_minus;
  Complex fN_plus;
  Complex fN_minus;
};

/// Symbols of the Dirichlet fractional Laplacian and Neumann operator acting
/// on x_+^beta, evaluated on either side of the origin.
HalflineSymbols halfline_symbols(const Order& order, Complex beta);

/// fL_plus alone: (-Delta)^s (x_+^beta)(1).
Complex dirichlet_symbol(const Order& order, Complex beta);

struct PlanarSymbols {
  SymbolValue f1;
  SymbolValue f2;
};

PlanarSymbols f1_f2_symbols(const Order& order, Complex beta);

/// Nearest point of {2s + j : j >= 0} ∪ {-1 - j : j >= 0} to beta.
Complex nearest_f_pole(const Order& order, Complex beta);

}  // namespace fneumann
