#pragma once

// Diagonalization of the adjoint representation: paired eigenvalues, ladder
// operators normalized to [Z_i, Z_{2K-i+1}] = 1, the diagonal form
// H = sum_i w_i (Z_i^+ Z_i + 1/2) + offset, reality classification and
// exceptional-point detection.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qboson/algebra.hpp"

namespace qboson {

enum class Reality { AllReal, Complex, ExceptionalPoint };
std::string to_string(Reality r);

enum class LadderRole { Lowering, Raising };

struct LadderOperator {
  cplx lambda;
  CVector C;
  LadderRole role;
};

/// One cluster of numerically coincident eigenvalues.
struct EigenCluster {
  cplx lambda;
  int algebraic = 1;
  int geometric = 1;
  bool defective() const noexcept { return geometric < algebraic; }
};

struct EPReport {
  std::vector<EigenCluster> clusters;  ///< only clusters with algebraic > 1
  bool defective = false;
  /// first defective cluster, if any
  std::optional<EigenCluster> degenerate() const;
};

/// Thrown when the adjoint matrix is defective or a ladder pair cannot be
/// normalized; carries the multiplicity diagnostic.
class ExceptionalPointError : public std::runtime_error {
 public:
  ExceptionalPointError(const std::string& what, EPReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const EPReport& report() const noexcept { return report_; }

 private:
  EPReport report_;
};

class PairingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralTolerances {
  double cluster = 1e-6;        ///< eigenvalue coincidence, relative to max(1, |lambda|)
  double rank = 1e-6;           ///< singular-value cutoff relative to sigma_max
  double pairing = 1e-8;        ///< |lambda_i + lambda_j| / max(1, ||H||_inf)
  double min_commutator = 1e-12;
};

/// 2K eigenvalues ordered as (lambda_1..lambda_K, lambda_{K+1}..lambda_{2K}) with
/// lambda_{2K-i+1} = -lambda_i. Lowering members have Re < 0 (Im < 0 on ties)
/// and are sorted by real part, then imaginary part. Works at defective
/// points too. Throws PairingError if no +- matching within tolerance exists.
std::vector<cplx> paired_eigenvalues(const AdjointRep& rep, const SpectralTolerances& tol = {});

/// Clusters within tol.cluster and computes geometric multiplicities as
/// 2K - rank(H - lambda I).
EPReport detect_ep(const AdjointRep& rep, const SpectralTolerances& tol = {});

struct Eigenpair {
  cplx lambda;
  CVector C;  ///< unit Euclidean norm
};

/// Paired eigenpairs in paired_eigenvalues order. Degenerate clusters get an
/// orthonormal eigenbasis. Throws ExceptionalPointError when defective.
std::vector<Eigenpair> eigenpairs(const AdjointRep& rep, const SpectralTolerances& tol = {});

struct LadderPair {
  LadderOperator lowering;  ///< Z_i
  LadderOperator raising;   ///< Z_{2K-i+1}
};

struct SpectralDecomposition {
  std::size_t modes = 0;
  std::vector<LadderPair> pairs;
  std::vector<cplx> frequencies;  ///< lambda_{2K-i+1}, i = 1..K
  cplx offset{0.0, 0.0};
  cplx ground_energy{0.0, 0.0};
  Reality reality = Reality::AllReal;
  bool defective = false;
};

/// Rescales so that [Z_i, Z_{2K-i+1}] = 1: the lowering member keeps its unit
/// eigenvector and the raising member carries the whole factor. Within a
/// degenerate cluster the commutator matrix is inverted so cross terms vanish.
/// Throws ExceptionalPointError if a pair commutator is below
/// tol.min_commutator.
SpectralDecomposition normalize_pairs(const std::vector<Eigenpair>& pairs,
                                      const CommutatorMatrix& U, cplx offset = {0.0, 0.0},
                                      const SpectralTolerances& tol = {});

/// eigenpairs + normalize_pairs + classification for a form.
SpectralDecomposition decompose(const QuadraticForm& form, const SpectralTolerances& tol = {});

/// sum_i w_i (n_i + 1/2) + offset.
cplx spectrum(const SpectralDecomposition& decomp, const std::vector<unsigned>& occupations);

/// EP precedence, then AllReal iff every |Im lambda| < tol * max(1, |lambda|).
Reality classify_reality(const AdjointRep& rep, double tol = 1e-9,
                         const SpectralTolerances& spectral_tol = {});

/// G and offset of 1/2 sum_i w_i (Z_i Z_{2K-i+1} + Z_{2K-i+1} Z_i) + offset.
QuadraticForm reconstruct_form(const SpectralDecomposition& decomp);

/// Smallest |lambda_i - lambda_j| over i < j.
double min_pairwise_gap(const std::vector<cplx>& lambdas);

}  // namespace qboson
