#pragma once

// Closed forms for the one-mode generalized Swanson oscillator
//   H = 1/2 (a^+ a + a a^+) + alpha a^2 + beta a^+2      (omega = 1)
// and two such oscillators coupled by gamma (a1 a2^+ + a1^+ a2), plus the
// algebraic canonical transform that brings the one-mode model to
// sqrt(1 - 4 alpha beta) (a^+ a + 1/2).

#include <array>
#include <utility>
#include <vector>

#include "qboson/algebra.hpp"
#include "qboson/spectral.hpp"

namespace qboson::swanson {

struct OneModeParams {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
};

struct TwoModeParams {
  cplx alpha{0.0, 0.0};
  cplx beta{0.0, 0.0};
  double gamma = 0.0;
};

QuadraticForm one_mode(const OneModeParams& p);

/// (-sqrt(1 - 4 alpha beta), +sqrt(1 - 4 alpha beta)), principal branch.
std::pair<cplx, cplx> one_mode_lambdas(const OneModeParams& p);

/// Ladder operators in index order Z_1..Z_2K. Lowering members are unit
/// norm; raising members carry the normalization so that [Z_i, Z_{2K-i+1}] = 1.
struct Ladders {
  std::vector<LadderOperator> Z;
  bool fallback = false;  ///< produced by the generic eigen-solver (alpha == 0)
};

/// Throws ExceptionalPointError when 1 - 4 alpha beta vanishes.
Ladders one_mode_ladders(const OneModeParams& p);

/// S with rows (s11, s12), (s21, s22) from the closed-form solution for s11 > 0.
/// Throws ExceptionalPointError at alpha beta = 1/4 and AlgebraError for
/// beta = 0, s11 <= 0, or 1 - 4 alpha beta on the negative real axis.
CanonicalMap bogoliubov_map(const OneModeParams& p, double s11);

/// Residuals of s11 s22 - s12 s21 - 1, alpha s11^2 + beta s21^2 + s11 s21 and
/// alpha s12^2 + beta s22^2 + s12 s22.
std::array<cplx, 3> canonical_conditions(const OneModeParams& p, const CanonicalMap& map);

/// Quadratic generator Q of S = e^Q: Q_reg = log(S^t) is its adjoint
/// representation and G_Q = -1/2 Q_reg U its coefficient matrix.
struct Generator {
  CMatrix Q_reg;
  CMatrix G_Q;
  double symmetry_defect = 0.0;
  QuadraticForm form() const;
};

/// Throws linalg::BranchError when S^t has no principal logarithm and
/// AlgebraError when G_Q comes out non-symmetric beyond 1e-9.
Generator generator_from_map(const CanonicalMap& map);

QuadraticForm two_mode(const TwoModeParams& p);

/// (-r_plus, -r_minus, r_minus, r_plus) with r_pm = sqrt((gamma +- 1)^2 - 4 alpha beta).
std::array<cplx, 4> two_mode_lambdas(const TwoModeParams& p);

Ladders two_mode_ladders(const TwoModeParams& p);

/// Values of alpha*beta where each radicand vanishes: ((gamma+1)^2/4, (gamma-1)^2/4).
std::pair<double, double> two_mode_ep_locus(double gamma);

}  // namespace qboson::swanson
