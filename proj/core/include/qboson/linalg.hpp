#pragma once

// Dense complex kernels used by the spectral and oracle modules: a complex
// Schur decomposition (Householder Hessenberg reduction followed by
// single-shift QR), and the principal matrix exponential and logarithm.

#include <stdexcept>
#include <string>

#include "qboson/algebra.hpp"

namespace qboson::linalg {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A = Q T Q^H with Q unitary and T upper triangular.
struct SchurForm {
  CMatrix Q;
  CMatrix T;
  int iterations = 0;
};

/// Throws ConvergenceError (with the stalled index and iteration count) when
/// the shifted QR iteration does not deflate within 40 sweeps per eigenvalue.
SchurForm complex_schur(const CMatrix& A);

/// Diagonal of the Schur triangle.
CVector eigenvalues(const CMatrix& A);

/// Scaling and squaring with a [13/13] Pade approximant
/// (degree chosen from the 1-norm, as in Higham 2005).
CMatrix expm(const CMatrix& A);
RMatrix expm(const RMatrix& A);

class BranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Principal square root of an upper-triangular matrix (Bjorck-Hammarling).
CMatrix sqrtm_triangular(const CMatrix& T);

/// Principal logarithm by inverse scaling and squaring on the Schur form:
/// repeated triangular square roots until ||T - I||_1 <= 0.25, then a 16-point
/// Gauss-Legendre evaluation of log(I + X). Throws BranchError when an
/// eigenvalue lies on the closed negative real axis.
CMatrix logm(const CMatrix& A);

/// Smallest singular values are counted as null directions when below
/// rel_tol * sigma_max.
int numerical_rank(const CMatrix& A, double rel_tol);

/// Orthonormal basis of the numerical null space of A (columns), with the
/// same threshold convention as numerical_rank.
CMatrix null_space(const CMatrix& A, double rel_tol);

double max_norm(const CMatrix& A);
double inf_norm(const CMatrix& A);

}  // namespace qboson::linalg
