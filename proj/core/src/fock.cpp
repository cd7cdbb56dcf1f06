#include "qboson/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qboson/linalg.hpp"

namespace qboson::fock {
namespace {

bool real_then_imag(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (base != 0 && r > std::numeric_limits<std::size_t>::max() / base)
      return std::numeric_limits<std::size_t>::max();
    r *= base;
  }
  return r;
}

// max |R_ij| / (sqrt(d_i d_j) h) over interior entries. With d the diagonal of
// a positive metric this bounds the residual against |rho_ij| <= sqrt(d_i d_j).
double scaled_residual(const CMatrix& R, const Eigen::VectorXd& d, double h,
                       const std::vector<char>& keep) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < R.cols(); ++j) {
    if (!keep[static_cast<std::size_t>(j)]) continue;
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
      if (!keep[static_cast<std::size_t>(i)]) continue;
      const double r = std::abs(R(i, j));
      const double s = std::sqrt(d(i) * d(j)) * h;
      if (s > 0.0)
        worst = std::max(worst, r / s);
      else if (r > 0.0)
        worst = std::numeric_limits<double>::infinity();
    }
  }
  return worst;
}

// Largest absolute column sum of H over interior columns.
double interior_col_norm(const CMatrix& H, const std::vector<char>& keep) {
  double h = 0.0;
  for (Eigen::Index j = 0; j < H.cols(); ++j)
    if (keep[static_cast<std::size_t>(j)]) h = std::max(h, H.col(j).cwiseAbs().sum());
  return h;
}

double interior_max(const CMatrix& R, const std::vector<char>& keep) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < R.cols(); ++j) {
    if (!keep[static_cast<std::size_t>(j)]) continue;
    for (Eigen::Index i = 0; i < R.rows(); ++i)
      if (keep[static_cast<std::size_t>(i)]) worst = std::max(worst, std::abs(R(i, j)));
  }
  return worst;
}

std::vector<char> interior_mask(const FockTruncation& trunc) {
  std::vector<char> keep(trunc.dimension());
  for (std::size_t k = 0; k < keep.size(); ++k) keep[k] = trunc.interior(k) ? 1 : 0;
  return keep;
}

}  // namespace

std::size_t FockTruncation::dimension() const { return ipow(nmax, modes); }

void FockTruncation::validate() const {
  if (modes == 0) throw DimensionError("FockTruncation: need at least one mode", 2);
  std::size_t fit = 1;
  while (ipow(fit + 1, modes) <= dimension_cap) ++fit;
  if (nmax < 2)
    throw DimensionError("FockTruncation: nmax must be at least 2", std::max<std::size_t>(fit, 2));
  if (dimension() > dimension_cap)
    throw DimensionError("FockTruncation: dimension " + std::to_string(nmax) + "^" +
                             std::to_string(modes) + " exceeds the cap of " +
                             std::to_string(dimension_cap) + "; use nmax <= " +
                             std::to_string(fit),
                         fit);
}

std::vector<std::size_t> FockTruncation::occupations(std::size_t index) const {
  std::vector<std::size_t> n(modes);
  for (std::size_t m = modes; m-- > 0;) {
    n[m] = index % nmax;
    index /= nmax;
  }
  return n;
}

bool FockTruncation::interior(std::size_t index, std::size_t margin) const {
  for (const auto n : occupations(index))
    if (n + margin >= nmax) return false;
  return true;
}

std::vector<SparseC> fock_matrices(const FockTruncation& trunc) {
  trunc.validate();
  const auto K = trunc.modes;
  const auto dim = static_cast<Eigen::Index>(trunc.dimension());
  std::vector<SparseC> ops;
  ops.reserve(2 * K);
  for (std::size_t mode = 0; mode < K; ++mode) {
    // stride of this mode's digit in the state index
    const std::size_t stride = ipow(trunc.nmax, K - 1 - mode);
    std::vector<Eigen::Triplet<cplx>> trip;
    for (std::size_t s = 0; s < trunc.dimension(); ++s) {
      const std::size_t n = (s / stride) % trunc.nmax;
      if (n == 0) continue;
      // a |n> = sqrt(n) |n - 1>
      trip.emplace_back(static_cast<Eigen::Index>(s - stride), static_cast<Eigen::Index>(s),
                        std::sqrt(static_cast<double>(n)));
    }
    SparseC a(dim, dim);
    a.setFromTriplets(trip.begin(), trip.end());
    ops.push_back(std::move(a));
  }
  for (std::size_t mode = 0; mode < K; ++mode) {
    SparseC ad = ops[mode].transpose();
    ops.push_back(std::move(ad));
  }
  return ops;
}

CMatrix assemble(const QuadraticForm& form, const FockTruncation& trunc) {
  if (form.modes() != trunc.modes)
    throw AlgebraError("assemble: form and truncation disagree on the mode count");
  const auto ops = fock_matrices(trunc);
  const auto dim = static_cast<Eigen::Index>(trunc.dimension());
  SparseC acc(dim, dim);
  const auto& G = form.G();
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
      if (G(i, j) == cplx{0.0, 0.0}) continue;
      SparseC prod = ops[static_cast<std::size_t>(i)] * ops[static_cast<std::size_t>(j)];
      acc += G(i, j) * prod;
    }
  CMatrix M = CMatrix(acc);
  M.diagonal().array() += form.offset();
  return M;
}

std::vector<cplx> oracle_eigenvalues(const CMatrix& M) {
  if (M.rows() != M.cols()) throw AlgebraError("oracle_eigenvalues: matrix must be square");
  if (M.rows() == 0) return {};
  std::vector<cplx> out;
  if (M.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::EigenSolver<RMatrix> real_solver;
    real_solver.setMaxIterations(60 * static_cast<Eigen::Index>(M.rows()));
    real_solver.compute(M.real(), false);
    if (real_solver.info() == Eigen::Success) {
      const auto& ev = real_solver.eigenvalues();
      out.assign(ev.data(), ev.data() + ev.size());
      std::sort(out.begin(), out.end(), real_then_imag);
      return out;
    }
  }
  Eigen::ComplexEigenSolver<CMatrix> solver;
  solver.setMaxIterations(60 * static_cast<Eigen::Index>(M.rows()));
  solver.compute(M, false);
  if (solver.info() != Eigen::Success)
    throw linalg::ConvergenceError("oracle_eigenvalues: QR reduction failed to converge for a " +
                                   std::to_string(M.rows()) + "x" + std::to_string(M.rows()) +
                                   " matrix (iteration limit " +
                                   std::to_string(60 * M.rows()) + ")");
  const auto& ev = solver.eigenvalues();
  out.assign(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), real_then_imag);
  return out;
}

std::vector<cplx> predicted_levels(const SpectralDecomposition& decomp, std::size_t count) {
  const auto K = decomp.modes;
  std::vector<cplx> levels;
  std::vector<unsigned> n(K, 0);
  const auto bound = static_cast<unsigned>(count);
  std::function<void(std::size_t)> walk = [&](std::size_t mode) {
    if (mode == K) {
      levels.push_back(spectrum(decomp, n));
      return;
    }
    for (unsigned k = 0; k <= bound; ++k) {
      n[mode] = k;
      walk(mode + 1);
    }
  };
  walk(0);
  std::sort(levels.begin(), levels.end(), real_then_imag);
  if (levels.size() > count) levels.resize(count);
  return levels;
}

OracleReport verify_spectrum(const QuadraticForm& form, const SpectralDecomposition& decomp,
                             std::size_t levels, const FockTruncation& trunc, double tol,
                             std::size_t stride) {
  if (stride == 0) stride = trunc.modes == 1 ? 20 : 5;
  OracleReport rep;
  rep.nmax = trunc.nmax;
  rep.real_spectrum = decomp.reality == Reality::AllReal;
  rep.eigenvalues = oracle_eigenvalues(assemble(form, trunc));
  const auto predicted = predicted_levels(decomp, levels);
  const auto count = std::min({levels, predicted.size(), rep.eigenvalues.size()});
  for (std::size_t k = 0; k < count; ++k) {
    const double dev = std::abs(predicted[k] - rep.eigenvalues[k]);
    rep.matched.push_back({predicted[k], rep.eigenvalues[k], dev});
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }

  const auto check = trunc.with_nmax(trunc.nmax + stride);
  rep.nmax_check = check.nmax;
  if (check.dimension() <= check.dimension_cap) {
    const auto finer = oracle_eigenvalues(assemble(form, check));
    for (std::size_t k = 0; k < count && k < finer.size(); ++k)
      rep.convergence_shift =
          std::max(rep.convergence_shift, std::abs(finer[k] - rep.eigenvalues[k]));
    rep.converged = rep.convergence_shift < tol / 10.0;
  } else {
    rep.convergence_shift = std::numeric_limits<double>::infinity();
    rep.converged = false;
  }
  rep.passed = rep.real_spectrum && rep.converged && count == levels && rep.max_deviation < tol;
  return rep;
}

AdjointActionReport verify_adjoint_action(const QuadraticForm& form, const FockTruncation& trunc) {
  const CMatrix H = assemble(form, trunc);
  const auto ops = fock_matrices(trunc);
  const CMatrix Hrep = adjoint_rep(form).H;
  const auto keep = interior_mask(trunc);
  AdjointActionReport rep;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const CMatrix Oi = CMatrix(ops[i]);
    CMatrix R = H * Oi - Oi * H;
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const cplx h = Hrep(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (h != cplx{0.0, 0.0}) R -= h * CMatrix(ops[j]);
    }
    const double inner = interior_max(R, keep);
    rep.interior_residuals.push_back(inner);
    rep.interior_residual = std::max(rep.interior_residual, inner);
    rep.full_residual = std::max(rep.full_residual, linalg::max_norm(R));
  }
  return rep;
}

MetricReport verify_metric(const swanson::OneModeParams& p, const CanonicalMap& S,
                           const FockTruncation& trunc, double tol, const MetricOptions& opts) {
  if (trunc.modes != 1) throw AlgebraError("verify_metric: the metric check is one-mode only");
  trunc.validate();
  const auto gen = swanson::generator_from_map(S);
  const auto Qform = gen.form();
  const auto nmax = static_cast<Eigen::Index>(trunc.nmax);
  const std::size_t stride = opts.work_stride == 0 ? trunc.nmax : opts.work_stride;

  MetricReport rep;
  CMatrix E;
  CMatrix previous;
  std::size_t work = std::max<std::size_t>(opts.work_start_factor * trunc.nmax, trunc.nmax);
  while (true) {
    const FockTruncation wt{1, work, std::max(work, trunc.dimension_cap)};
    const CMatrix MQ = assemble(Qform, wt);
    if (MQ.imag().cwiseAbs().maxCoeff() == 0.0)
      E = linalg::expm(RMatrix(MQ.real())).cast<cplx>();
    else
      E = linalg::expm(MQ);
    const CMatrix block = (E.adjoint() * E.leftCols(nmax)).topRows(nmax);
    rep.work_cutoff = work;
    if (previous.size() != 0) {
      double change = 0.0;
      for (Eigen::Index j = 0; j < nmax; ++j)
        for (Eigen::Index i = 0; i < nmax; ++i) {
          const double s = std::sqrt(block(i, i).real() * block(j, j).real());
          if (s > 0.0) change = std::max(change, std::abs(block(i, j) - previous(i, j)) / s);
        }
      if (change < opts.convergence) {
        rep.converged = true;
        rep.rho = block;
        break;
      }
    }
    previous = block;
    rep.rho = block;
    if (work + stride > opts.max_work) break;
    work += stride;
  }

  const CMatrix H = assemble(swanson::one_mode(p), trunc);
  const CMatrix Hd = H.adjoint();
  const auto keep = interior_mask(trunc);
  const CMatrix R = rep.rho * H - Hd * rep.rho;
  const double h = interior_col_norm(H, keep);
  const Eigen::VectorXd d = rep.rho.diagonal().real();
  rep.interior_residual = scaled_residual(R, d, h, keep);
  rep.interior_abs_residual = interior_max(R, keep);
  rep.identity_residual =
      scaled_residual(H - Hd, Eigen::VectorXd::Ones(H.rows()), h, keep);

  // rho_int = B^+ B with B the interior columns of E; scale columns to unit
  // diagonal and read the smallest eigenvalue off the singular values.
  const Eigen::Index m = nmax - 2;
  CMatrix B = E.leftCols(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double d = B.col(j).norm();
    if (d > 0.0) B.col(j) /= d;
  }
  Eigen::JacobiSVD<CMatrix> svd(B);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  rep.min_scaled_eigenvalue = smin * smin;
  const double rank_cut =
      static_cast<double>(B.rows()) * std::numeric_limits<double>::epsilon() * sv(0);
  rep.positive_definite = smin > rank_cut;
  rep.passed = rep.converged && rep.positive_definite && rep.interior_residual < tol;
  return rep;
}

}  // namespace qboson::fock
