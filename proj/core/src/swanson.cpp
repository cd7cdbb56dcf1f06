#include "qboson/swanson.hpp"

#include <cmath>

#include "qboson/linalg.hpp"

namespace qboson::swanson {
namespace {

constexpr double kRadicandZero = 1e-14;

Ladders from_decomposition(const QuadraticForm& form) {
  const auto d = decompose(form);
  const auto K = d.modes;
  Ladders out;
  out.fallback = true;
  out.Z.resize(2 * K);
  for (std::size_t i = 0; i < K; ++i) {
    out.Z[i] = d.pairs[i].lowering;
    out.Z[2 * K - 1 - i] = d.pairs[i].raising;
  }
  return out;
}

ExceptionalPointError radicand_error(const std::string& where) {
  EPReport rep;
  rep.clusters.push_back({cplx{0.0, 0.0}, 2, 1});
  rep.defective = true;
  return ExceptionalPointError(where + ": vanishing radicand, exceptional point", rep);
}

// Lowering vector normalized to unit norm, raising vector scaled so that
// [lowering, raising] = 1.
std::pair<CVector, CVector> normalize(const CVector& lo, const CVector& hi) {
  const CMatrix U = commutator_matrix(BosonBasis(static_cast<std::size_t>(lo.size()) / 2)).U.cast<cplx>();
  CVector l = lo / lo.norm();
  const cplx w = (l.transpose() * U * hi)(0, 0);
  return {l, hi / w};
}

}  // namespace

QuadraticForm one_mode(const OneModeParams& p) {
  CMatrix G(2, 2);
  G << p.alpha, 0.5, 0.5, p.beta;
  return QuadraticForm(BosonBasis(1), G);
}

std::pair<cplx, cplx> one_mode_lambdas(const OneModeParams& p) {
  const cplx r = std::sqrt(1.0 - 4.0 * p.alpha * p.beta);
  return {-r, r};
}

Ladders one_mode_ladders(const OneModeParams& p) {
  const cplx rad = 1.0 - 4.0 * p.alpha * p.beta;
  if (std::abs(rad) <= kRadicandZero) throw radicand_error("one_mode_ladders");
  if (p.alpha == cplx{0.0, 0.0}) return from_decomposition(one_mode(p));
  const cplx r = std::sqrt(rad);
  CVector v1(2), v2(2);
  v1 << 1.0, (1.0 - r) / (2.0 * p.alpha);
  v2 << 1.0, (1.0 + r) / (2.0 * p.alpha);
  const auto [z1, z2] = normalize(v1, v2);
  Ladders out;
  out.Z = {{-r, z1, LadderRole::Lowering}, {r, z2, LadderRole::Raising}};
  return out;
}

CanonicalMap bogoliubov_map(const OneModeParams& p, double s11) {
  if (!(s11 > 0.0) || !std::isfinite(s11))
    throw AlgebraError("bogoliubov_map: s11 must be a positive real number");
  const cplx rad = 1.0 - 4.0 * p.alpha * p.beta;
  if (std::abs(rad) <= kRadicandZero) {
    EPReport rep;
    rep.clusters.push_back({cplx{0.0, 0.0}, 2, 1});
    rep.defective = true;
    throw ExceptionalPointError(
        "bogoliubov_map: the canonical transform breaks down when alpha*beta = 1/4", rep);
  }
  if (p.beta == cplx{0.0, 0.0})
    throw AlgebraError(
        "bogoliubov_map: beta = 0 makes the closed form degenerate (s21 divides by beta); "
        "use the spectral decomposition instead");
  if (rad.real() < 0.0 && std::abs(rad.imag()) <= kRadicandZero * std::max(1.0, std::abs(rad)))
    throw AlgebraError("bogoliubov_map: 1 - 4 alpha beta lies on the negative real axis");
  const cplx r = std::sqrt(rad);
  CMatrix S(2, 2);
  S(0, 0) = s11;
  S(0, 1) = -p.beta / (s11 * r);
  S(1, 0) = (s11 * r - s11) / (2.0 * p.beta);
  S(1, 1) = 1.0 / (2.0 * s11 * r) + 1.0 / (2.0 * s11);
  return {S};
}

std::array<cplx, 3> canonical_conditions(const OneModeParams& p, const CanonicalMap& map) {
  const auto& S = map.S;
  if (S.rows() != 2 || S.cols() != 2)
    throw AlgebraError("canonical_conditions: one-mode map must be 2x2");
  const cplx s11 = S(0, 0), s12 = S(0, 1), s21 = S(1, 0), s22 = S(1, 1);
  return {s11 * s22 - s12 * s21 - 1.0, p.alpha * s11 * s11 + p.beta * s21 * s21 + s11 * s21,
          p.alpha * s12 * s12 + p.beta * s22 * s22 + s12 * s22};
}

QuadraticForm Generator::form() const {
  const CMatrix sym = 0.5 * (G_Q + G_Q.transpose());
  return QuadraticForm(BosonBasis(static_cast<std::size_t>(G_Q.rows()) / 2), sym);
}

Generator generator_from_map(const CanonicalMap& map) {
  const auto n = map.S.rows();
  if (map.S.cols() != n || n == 0 || n % 2 != 0)
    throw AlgebraError("generator_from_map: S must be 2K x 2K");
  Generator g;
  try {
    g.Q_reg = linalg::logm(map.S.transpose());
  } catch (const linalg::BranchError& e) {
    throw linalg::BranchError(std::string(e.what()) +
                              "; choose a different s11 gauge so that S^t avoids the branch cut");
  }
  const CMatrix U = commutator_matrix(BosonBasis(static_cast<std::size_t>(n / 2))).U.cast<cplx>();
  g.G_Q = -0.5 * g.Q_reg * U;
  g.symmetry_defect = linalg::max_norm(g.G_Q - g.G_Q.transpose());
  if (g.symmetry_defect > 1e-9)
    throw AlgebraError("generator_from_map: G_Q is not symmetric (defect " +
                       std::to_string(g.symmetry_defect) + "); is S canonical?");
  return g;
}

QuadraticForm two_mode(const TwoModeParams& p) {
  // a1 = 0, a2 = 1, a1^+ = 2, a2^+ = 3; terms as written in normal order.
  const std::vector<RawTerm> terms{
      {2, 0, 1.0},     {3, 1, 1.0},     {0, 0, p.alpha},  {1, 1, p.alpha},
      {2, 2, p.beta},  {3, 3, p.beta},  {0, 3, p.gamma},  {2, 1, p.gamma},
  };
  return build_quadratic(BosonBasis(2), terms, 1.0);
}

std::array<cplx, 4> two_mode_lambdas(const TwoModeParams& p) {
  const cplx ab4 = 4.0 * p.alpha * p.beta;
  const cplx rp = std::sqrt((p.gamma + 1.0) * (p.gamma + 1.0) - ab4);
  const cplx rm = std::sqrt((p.gamma - 1.0) * (p.gamma - 1.0) - ab4);
  return {-rp, -rm, rm, rp};
}

Ladders two_mode_ladders(const TwoModeParams& p) {
  const cplx ab4 = 4.0 * p.alpha * p.beta;
  const cplx radp = (p.gamma + 1.0) * (p.gamma + 1.0) - ab4;
  const cplx radm = (p.gamma - 1.0) * (p.gamma - 1.0) - ab4;
  if (std::abs(radp) <= kRadicandZero || std::abs(radm) <= kRadicandZero)
    throw radicand_error("two_mode_ladders");
  if (p.alpha == cplx{0.0, 0.0}) return from_decomposition(two_mode(p));
  const cplx rp = std::sqrt(radp);
  const cplx rm = std::sqrt(radm);
  const cplx a2 = 2.0 * p.alpha;
  const double g = p.gamma;
  CVector v1(4), v2(4), v3(4), v4(4);
  v1 << a2, a2, g + 1.0 - rp, g + 1.0 - rp;
  v2 << a2, -a2, 1.0 - g - rm, g - 1.0 + rm;
  v3 << a2, -a2, 1.0 - g + rm, g - 1.0 - rm;
  v4 << a2, a2, g + 1.0 + rp, g + 1.0 + rp;
  const auto [z1, z4] = normalize(v1, v4);
  const auto [z2, z3] = normalize(v2, v3);
  Ladders out;
  out.Z = {{-rp, z1, LadderRole::Lowering},
           {-rm, z2, LadderRole::Lowering},
           {rm, z3, LadderRole::Raising},
           {rp, z4, LadderRole::Raising}};
  return out;
}

std::pair<double, double> two_mode_ep_locus(double gamma) {
  return {(gamma + 1.0) * (gamma + 1.0) / 4.0, (gamma - 1.0) * (gamma - 1.0) / 4.0};
}

}  // namespace qboson::swanson
