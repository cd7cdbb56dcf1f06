#pragma once

// Brute-force verifier: quadratic forms as dense matrices in a truncated
// number basis |n_1 .. n_K>, n_i < nmax, diagonalized with an independent
// dense eigensolver and compared against the algebraic predictions.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>

#include "qboson/algebra.hpp"
#include "qboson/spectral.hpp"
#include "qboson/swanson.hpp"

namespace qboson::fock {

using SparseC = Eigen::SparseMatrix<cplx>;

class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& what, std::size_t suggested_nmax)
      : std::invalid_argument(what), suggested_nmax_(suggested_nmax) {}
  /// Largest cutoff that fits under the dimension cap.
  std::size_t suggested_nmax() const noexcept { return suggested_nmax_; }

 private:
  std::size_t suggested_nmax_;
};

struct FockTruncation {
  std::size_t modes = 1;
  std::size_t nmax = 2;
  std::size_t dimension_cap = 4096;

  std::size_t dimension() const;
  /// Throws DimensionError for nmax < 2 or nmax^K above the cap.
  void validate() const;
  FockTruncation with_nmax(std::size_t n) const { return {modes, n, dimension_cap}; }
  /// Digits of a state index, mode 1 most significant.
  std::vector<std::size_t> occupations(std::size_t index) const;
  /// All mode occupations strictly below nmax - margin.
  bool interior(std::size_t index, std::size_t margin = 2) const;
};

/// Matrices of (a_1..a_K, a_1^+..a_K^+), mode i embedded as I x .. x a x .. x I.
std::vector<SparseC> fock_matrices(const FockTruncation& trunc);

/// sum_ij G_ij M_i M_j + offset I.
CMatrix assemble(const QuadraticForm& form, const FockTruncation& trunc);

/// All eigenvalues, sorted by real part then imaginary part.
std::vector<cplx> oracle_eigenvalues(const CMatrix& M);

struct LevelMatch {
  cplx predicted;
  cplx oracle;
  double deviation = 0.0;
};

struct OracleReport {
  std::vector<cplx> eigenvalues;
  std::vector<LevelMatch> matched;
  bool converged = false;
  double max_deviation = 0.0;
  double convergence_shift = 0.0;  ///< largest level movement between cutoffs
  std::size_t nmax = 0;
  std::size_t nmax_check = 0;
  bool real_spectrum = true;  ///< complex spectra are compared but not judged
  bool passed = false;
};

/// The `count` predicted levels sum_i w_i (n_i + 1/2) + offset of smallest
/// real part, from a bounded search n_i <= count.
std::vector<cplx> predicted_levels(const SpectralDecomposition& decomp, std::size_t count);

/// stride = 0 picks +20 for one mode and +5 per mode otherwise.
OracleReport verify_spectrum(const QuadraticForm& form, const SpectralDecomposition& decomp,
                             std::size_t levels, const FockTruncation& trunc, double tol,
                             std::size_t stride = 0);

struct AdjointActionReport {
  std::vector<double> interior_residuals;  ///< per basis operator
  double interior_residual = 0.0;
  double full_residual = 0.0;
};

/// Fock matrix of [H, O_i] - sum_j H_ji O_j, measured on the interior block.
AdjointActionReport verify_adjoint_action(const QuadraticForm& form, const FockTruncation& trunc);

struct MetricOptions {
  std::size_t work_start_factor = 2;   ///< first working cutoff = factor * nmax
  std::size_t work_stride = 0;         ///< 0 means nmax
  std::size_t max_work = 1024;
  double convergence = 1e-10;          ///< change of the nmax block, scaled like the residual
};

struct MetricReport {
  /// max over interior entries of |rho H - H^+ rho|_mn / (sqrt(rho_mm rho_nn) h),
  /// h the largest interior column sum of |H|
  double interior_residual = 0.0;
  double interior_abs_residual = 0.0;
  double identity_residual = 0.0;  ///< same measure with rho = I
  double min_scaled_eigenvalue = 0.0;  ///< of D^-1/2 rho D^-1/2 on the interior block
  bool positive_definite = false;
  std::size_t work_cutoff = 0;
  bool converged = false;
  CMatrix rho;  ///< nmax x nmax block
  bool passed = false;
};

/// rho = exp(M_Q)^+ exp(M_Q) with Q from generator_from_map(S). The
/// exponential is taken in a larger working cutoff, grown until the nmax block
/// of rho stops changing.
MetricReport verify_metric(const swanson::OneModeParams& p, const CanonicalMap& S,
                           const FockTruncation& trunc, double tol,
                           const MetricOptions& opts = {});

}  // namespace qboson::fock
