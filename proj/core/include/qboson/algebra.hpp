#pragma once

// Quadratic boson forms H = sum_ij G_ij O_i O_j + offset over the basis
// (a_1..a_K, a_1^+..a_K^+), their commutator matrix and adjoint
// representation, and transformation under linear canonical maps.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qboson {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Raised for malformed inputs: bad indices, dimension mismatches,
/// non-symmetric coefficient matrices, non-canonical maps.
class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Boson operator basis with K modes. Index i < K is a_i, index i >= K is
/// the creator conjugate to i - K (0-based throughout the API).
class BosonBasis {
 public:
  explicit BosonBasis(std::size_t modes);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return 2 * modes_; }
  bool is_annihilator(std::size_t index) const noexcept { return index < modes_; }
  /// Index of O_i^dagger.
  std::size_t adjoint_index(std::size_t index) const noexcept {
    return index < modes_ ? index + modes_ : index - modes_;
  }
  /// Human-readable operator label, e.g. "a2" or "a1+".
  std::string label(std::size_t index) const;

  friend bool operator==(const BosonBasis&, const BosonBasis&) = default;

 private:
  std::size_t modes_;
};

/// U_ij = [O_i, O_j]; for bosons the block matrix [[0, I], [-I, 0]].
struct CommutatorMatrix {
  RMatrix U;
};

CommutatorMatrix commutator_matrix(const BosonBasis& basis);

/// One raw product term coefficient * O_i O_j (0-based indices).
struct RawTerm {
  std::size_t i;
  std::size_t j;
  cplx coefficient;
};

class QuadraticForm {
 public:
  /// Throws AlgebraError unless G is 2K x 2K and symmetric to `symmetry_tol`
  /// (max-norm of G - G^t). The stored G is exactly symmetrized.
  QuadraticForm(BosonBasis basis, CMatrix G, cplx offset = {0.0, 0.0},
                double symmetry_tol = 1e-12);

  const BosonBasis& basis() const noexcept { return basis_; }
  std::size_t modes() const noexcept { return basis_.modes(); }
  const CMatrix& G() const noexcept { return G_; }
  cplx offset() const noexcept { return offset_; }

 private:
  BosonBasis basis_;
  CMatrix G_;
  cplx offset_;
};

/// Normal-form a list of raw products: each c O_i O_j is split as
/// c/2 (O_i O_j + O_j O_i) + c/2 U_ij, the constant going into the offset.
QuadraticForm build_quadratic(const BosonBasis& basis, const std::vector<RawTerm>& terms,
                              cplx offset = {0.0, 0.0});

/// [H, O_i] = sum_j H_ji O_j.
struct AdjointRep {
  CMatrix H;
  std::size_t modes() const noexcept { return static_cast<std::size_t>(H.rows()) / 2; }
};

/// H = 2 G U.
AdjointRep adjoint_rep(const QuadraticForm& form);

/// [Z_a, Z_b] = Ca^t U Cb for Z = sum_i c_i O_i.
cplx commutator_linear(const CVector& Ca, const CVector& Cb, const CommutatorMatrix& U);

/// S O_i S^-1 = sum_j S_ij O_j (row i holds the image of O_i).
struct CanonicalMap {
  CMatrix S;
};

/// max |S U S^t - U|.
double canonicality_defect(const CanonicalMap& map);

inline constexpr double kDefaultCanonicalTol = 1e-9;

/// Substitutes O_i -> sum_j S_ij O_j: G~ = S^t G S, then normal form.
/// Throws AlgebraError when the map is not canonical within `tol`.
QuadraticForm transform_form(const QuadraticForm& form, const CanonicalMap& map,
                             double tol = kDefaultCanonicalTol);

/// Characteristic polynomial coefficients of a square matrix, lowest degree
/// first (Faddeev-LeVerrier), normalized to a monic leading term.
std::vector<cplx> characteristic_polynomial(const CMatrix& A);

/// Entrywise complex conjugate of G and offset: the parameter map
/// (alpha, beta) -> (alpha*, beta*) for the model families here.
QuadraticForm pt_conjugate(const QuadraticForm& form);
bool is_pt_symmetric(const QuadraticForm& form, double tol = 1e-12);

/// True iff the operator is Hermitian: G equals the conjugate of its
/// basis-adjoint rearrangement and the offset is real.
bool is_hermitian(const QuadraticForm& form, double tol = 1e-12);

}  // namespace qboson
