#include "qboson/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qboson {

BosonBasis::BosonBasis(std::size_t modes) : modes_(modes) {
  if (modes == 0) throw AlgebraError("BosonBasis: mode count must be positive");
}

std::string BosonBasis::label(std::size_t index) const {
  if (index >= size()) throw AlgebraError("BosonBasis::label: index out of range");
  const std::size_t mode = (index % modes_) + 1;
  return "a" + std::to_string(mode) + (is_annihilator(index) ? "" : "+");
}

CommutatorMatrix commutator_matrix(const BosonBasis& basis) {
  const auto K = static_cast<Eigen::Index>(basis.modes());
  RMatrix U = RMatrix::Zero(2 * K, 2 * K);
  U.topRightCorner(K, K).setIdentity();
  U.bottomLeftCorner(K, K) = -RMatrix::Identity(K, K);
  return {U};
}

QuadraticForm::QuadraticForm(BosonBasis basis, CMatrix G, cplx offset, double symmetry_tol)
    : basis_(basis), G_(std::move(G)), offset_(offset) {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  if (G_.rows() != n || G_.cols() != n)
    throw AlgebraError("QuadraticForm: G must be " + std::to_string(n) + "x" +
                       std::to_string(n));
  if (!G_.allFinite() || !std::isfinite(offset_.real()) || !std::isfinite(offset_.imag()))
    throw AlgebraError("QuadraticForm: non-finite coefficients");
  const double asym = (G_ - G_.transpose()).cwiseAbs().maxCoeff();
  if (asym > symmetry_tol)
    throw AlgebraError("QuadraticForm: G is not symmetric (max |G - G^t| = " +
                       std::to_string(asym) + ")");
  const CMatrix sym = 0.5 * (G_ + G_.transpose());
  G_ = sym;
}

QuadraticForm build_quadratic(const BosonBasis& basis, const std::vector<RawTerm>& terms,
                              cplx offset) {
  const auto n = basis.size();
  const auto U = commutator_matrix(basis).U;
  CMatrix G = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& t : terms) {
    if (t.i >= n || t.j >= n)
      throw AlgebraError("build_quadratic: term index (" + std::to_string(t.i) + ", " +
                         std::to_string(t.j) + ") out of range for " + std::to_string(n) +
                         " basis operators");
    const auto i = static_cast<Eigen::Index>(t.i);
    const auto j = static_cast<Eigen::Index>(t.j);
    G(i, j) += 0.5 * t.coefficient;
    G(j, i) += 0.5 * t.coefficient;
    offset += 0.5 * t.coefficient * U(i, j);
  }
  return QuadraticForm(basis, std::move(G), offset);
}

AdjointRep adjoint_rep(const QuadraticForm& form) {
  const auto U = commutator_matrix(form.basis()).U;
  return {2.0 * form.G() * U.cast<cplx>()};
}

cplx commutator_linear(const CVector& Ca, const CVector& Cb, const CommutatorMatrix& U) {
  if (Ca.size() != U.U.rows() || Cb.size() != U.U.rows())
    throw AlgebraError("commutator_linear: coefficient vectors must have length " +
                       std::to_string(U.U.rows()));
  return (Ca.transpose() * U.U.cast<cplx>() * Cb)(0, 0);
}

double canonicality_defect(const CanonicalMap& map) {
  const auto n = map.S.rows();
  if (map.S.cols() != n || n % 2 != 0)
    throw AlgebraError("CanonicalMap: S must be square with even dimension");
  const CMatrix U = commutator_matrix(BosonBasis(static_cast<std::size_t>(n / 2))).U.cast<cplx>();
  return (map.S * U * map.S.transpose() - U).cwiseAbs().maxCoeff();
}

QuadraticForm transform_form(const QuadraticForm& form, const CanonicalMap& map, double tol) {
  if (map.S.rows() != form.G().rows() || map.S.cols() != form.G().cols())
    throw AlgebraError("transform_form: map dimension does not match the form");
  const double defect = canonicality_defect(map);
  if (!(defect <= tol))
    throw AlgebraError("transform_form: map is not canonical (max |S U S^t - U| = " +
                       std::to_string(defect) + ")");
  const CMatrix raw = map.S.transpose() * form.G() * map.S;
  const auto n = form.basis().size();
  std::vector<RawTerm> terms;
  terms.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      terms.push_back({i, j, raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return build_quadratic(form.basis(), terms, form.offset());
}

std::vector<cplx> characteristic_polynomial(const CMatrix& A) {
  const auto n = A.rows();
  if (A.cols() != n) throw AlgebraError("characteristic_polynomial: matrix must be square");
  // det(lambda I - A) = sum_k c_k lambda^k with c_n = 1.
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx{0.0, 0.0});
  c[static_cast<std::size_t>(n)] = 1.0;
  CMatrix M = CMatrix::Zero(n, n);
  const CMatrix I = CMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = A * M + c[static_cast<std::size_t>(n - k + 1)] * I;
    c[static_cast<std::size_t>(n - k)] = -(A * M).trace() / static_cast<double>(k);
  }
  return c;
}

QuadraticForm pt_conjugate(const QuadraticForm& form) {
  return QuadraticForm(form.basis(), form.G().conjugate(), std::conj(form.offset()));
}

bool is_pt_symmetric(const QuadraticForm& form, double tol) {
  const auto image = pt_conjugate(form);
  return (image.G() - form.G()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(image.offset() - form.offset()) <= tol;
}

bool is_hermitian(const QuadraticForm& form, double tol) {
  const auto& b = form.basis();
  const auto n = static_cast<Eigen::Index>(b.size());
  // (sum g_ij O_i O_j)^+ = sum conj(g_ij) O_j^+ O_i^+; coefficient of O_a O_b is
  // conj(g_{a+ b+}) after using symmetry.
  double worst = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto ad = static_cast<Eigen::Index>(b.adjoint_index(static_cast<std::size_t>(a)));
      const auto cd = static_cast<Eigen::Index>(b.adjoint_index(static_cast<std::size_t>(c)));
      worst = std::max(worst, std::abs(form.G()(a, c) - std::conj(form.G()(ad, cd))));
    }
  return worst <= tol && std::abs(form.offset().imag()) <= tol;
}

}  // namespace qboson
