#include "qboson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

#include "qboson/linalg.hpp"

namespace qboson {
namespace {

double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

bool same_cluster(cplx a, cplx b, double tol) {
  return std::abs(a - b) <= tol * std::max(scale_of(a), scale_of(b));
}

// Single-linkage clustering; returns a cluster id per entry, ids in order of
// first appearance.
std::vector<int> cluster_ids(const std::vector<cplx>& values, double tol) {
  const auto n = values.size();
  std::vector<int> id(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (id[i] >= 0) continue;
    id[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const auto k = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j)
        if (id[j] < 0 && same_cluster(values[k], values[j], tol)) {
          id[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  return id;
}

// Lowering member of a +- pair: smaller real part, or smaller imaginary part
// when the real parts agree.
bool is_lowering_first(cplx x, cplx y) {
  const double tie = 1e-12 * std::max(scale_of(x), scale_of(y));
  if (std::abs(x.real() - y.real()) > tie) return x.real() < y.real();
  return x.imag() <= y.imag();
}

bool lowering_less(cplx x, cplx y) {
  const double tie = 1e-12 * std::max(scale_of(x), scale_of(y));
  if (std::abs(x.real() - y.real()) > tie) return x.real() < y.real();
  return x.imag() < y.imag();
}

// Fix the phase: the largest component (first on near-ties) becomes real positive.
void fix_phase(CVector& v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) >= (1.0 - 1e-9) * vmax) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      return;
    }
}

Reality reality_of(const std::vector<cplx>& lambdas, double tol) {
  for (const auto& l : lambdas)
    if (std::abs(l.imag()) >= tol * scale_of(l)) return Reality::Complex;
  return Reality::AllReal;
}

}  // namespace

std::string to_string(Reality r) {
  switch (r) {
    case Reality::AllReal: return "AllReal";
    case Reality::Complex: return "Complex";
    case Reality::ExceptionalPoint: return "ExceptionalPoint";
  }
  return "Unknown";
}

std::optional<EigenCluster> EPReport::degenerate() const {
  for (const auto& c : clusters)
    if (c.defective()) return c;
  return std::nullopt;
}

std::vector<cplx> paired_eigenvalues(const AdjointRep& rep, const SpectralTolerances& tol) {
  const auto n = static_cast<std::size_t>(rep.H.rows());
  if (rep.H.cols() != rep.H.rows() || n == 0 || n % 2 != 0)
    throw AlgebraError("paired_eigenvalues: adjoint matrix must be 2K x 2K");
  const CVector ev = linalg::eigenvalues(rep.H);
  std::vector<cplx> raw(ev.data(), ev.data() + ev.size());

  struct Candidate {
    double cost;
    std::size_t i, j;
  };
  std::vector<Candidate> cand;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) cand.push_back({std::abs(raw[i] + raw[j]), i, j});
  std::stable_sort(cand.begin(), cand.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

  const double limit = tol.pairing * std::max(1.0, linalg::inf_norm(rep.H));
  std::vector<bool> used(n, false);
  std::vector<cplx> lowering;
  double worst = 0.0;
  for (const auto& c : cand) {
    if (used[c.i] || used[c.j]) continue;
    used[c.i] = used[c.j] = true;
    worst = std::max(worst, c.cost);
    const cplx lo = is_lowering_first(raw[c.i], raw[c.j]) ? raw[c.i] : raw[c.j];
    const cplx hi = lo == raw[c.i] ? raw[c.j] : raw[c.i];
    lowering.push_back(0.5 * (lo - hi));
  }
  if (worst > limit)
    throw PairingError("paired_eigenvalues: no +-lambda matching within tolerance (worst |l_i + "
                       "l_j| = " + std::to_string(worst) + ")");
  std::stable_sort(lowering.begin(), lowering.end(), lowering_less);

  const auto K = n / 2;
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < K; ++i) {
    out[i] = lowering[i];
    out[n - 1 - i] = -lowering[i];
  }
  return out;
}

EPReport detect_ep(const AdjointRep& rep, const SpectralTolerances& tol) {
  const auto lambdas = paired_eigenvalues(rep, tol);
  const auto ids = cluster_ids(lambdas, tol.cluster);
  const int nclusters = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  const auto n = rep.H.rows();
  EPReport report;
  for (int c = 0; c < nclusters; ++c) {
    cplx sum{0.0, 0.0};
    int m = 0;
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      if (ids[k] == c) {
        sum += lambdas[k];
        ++m;
      }
    if (m < 2) continue;
    EigenCluster cl;
    cl.lambda = sum / static_cast<double>(m);
    cl.algebraic = m;
    const CMatrix shifted = rep.H - cl.lambda * CMatrix::Identity(n, n);
    cl.geometric = static_cast<int>(n) - linalg::numerical_rank(shifted, tol.rank);
    report.defective = report.defective || cl.defective();
    report.clusters.push_back(cl);
  }
  return report;
}

std::vector<Eigenpair> eigenpairs(const AdjointRep& rep, const SpectralTolerances& tol) {
  const auto report = detect_ep(rep, tol);
  if (report.defective) {
    const auto d = *report.degenerate();
    throw ExceptionalPointError(
        "eigenpairs: adjoint matrix is defective at lambda = " + std::to_string(d.lambda.real()) +
            (d.lambda.imag() < 0 ? "" : "+") + std::to_string(d.lambda.imag()) +
            "i (algebraic " + std::to_string(d.algebraic) + ", geometric " +
            std::to_string(d.geometric) + ")",
        report);
  }
  const auto lambdas = paired_eigenvalues(rep, tol);
  const auto ids = cluster_ids(lambdas, tol.cluster);
  const auto n = rep.H.rows();
  std::vector<Eigenpair> out(lambdas.size());
  std::vector<int> done(lambdas.size(), 0);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (done[k]) continue;
    std::vector<std::size_t> members;
    cplx mean{0.0, 0.0};
    for (std::size_t j = 0; j < lambdas.size(); ++j)
      if (ids[j] == ids[k]) {
        members.push_back(j);
        mean += lambdas[j];
      }
    mean /= static_cast<double>(members.size());
    const auto m = static_cast<Eigen::Index>(members.size());
    const CMatrix shifted = rep.H - mean * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const CMatrix basis = svd.matrixV().rightCols(m);
    for (Eigen::Index c = 0; c < m; ++c) {
      const auto idx = members[static_cast<std::size_t>(c)];
      CVector v = basis.col(c);
      v.normalize();
      if (m == 1) fix_phase(v);
      out[idx] = {lambdas[idx], v};
      done[idx] = 1;
    }
  }
  return out;
}

SpectralDecomposition normalize_pairs(const std::vector<Eigenpair>& pairs,
                                      const CommutatorMatrix& U, cplx offset,
                                      const SpectralTolerances& tol) {
  const auto n = pairs.size();
  if (n == 0 || n % 2 != 0 || static_cast<Eigen::Index>(n) != U.U.rows())
    throw AlgebraError("normalize_pairs: need 2K eigenpairs matching the commutator matrix");
  const auto K = n / 2;
  const CMatrix Uc = U.U.cast<cplx>();
  auto omega = [&](const CVector& a, const CVector& b) { return (a.transpose() * Uc * b)(0, 0); };

  std::vector<cplx> lowering_lambdas(K);
  for (std::size_t i = 0; i < K; ++i) lowering_lambdas[i] = pairs[i].lambda;
  const auto ids = cluster_ids(lowering_lambdas, tol.cluster);

  SpectralDecomposition d;
  d.modes = K;
  d.offset = offset;
  d.pairs.resize(K);
  std::vector<int> done(K, 0);

  auto ep_error = [&](const std::string& what, cplx lambda, double value) {
    EPReport rep;
    rep.clusters.push_back({lambda, 2, 1});
    rep.defective = true;
    return ExceptionalPointError(what + " (|commutator| = " + std::to_string(value) +
                                     "); ladder construction impossible near an exceptional point",
                                 rep);
  };

  for (std::size_t i = 0; i < K; ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group;
    for (std::size_t j = 0; j < K; ++j)
      if (ids[j] == ids[i]) group.push_back(j);
    const auto m = static_cast<Eigen::Index>(group.size());
    const cplx mu = pairs[i].lambda;
    const bool self_paired = same_cluster(mu, -mu, tol.cluster);

    if (!self_paired) {
      CMatrix VL(static_cast<Eigen::Index>(n), m);
      CMatrix VR(static_cast<Eigen::Index>(n), m);
      for (Eigen::Index c = 0; c < m; ++c) {
        VL.col(c) = pairs[group[static_cast<std::size_t>(c)]].C;
        VR.col(c) = pairs[n - 1 - group[static_cast<std::size_t>(c)]].C;
      }
      const CMatrix M = VL.transpose() * Uc * VR;
      Eigen::JacobiSVD<CMatrix> svd(M);
      const double smin = svd.singularValues()(m - 1);
      if (smin < tol.min_commutator)
        throw ep_error("normalize_pairs: pair commutator vanishes", mu, smin);
      const CMatrix W = VR * M.inverse();
      for (Eigen::Index c = 0; c < m; ++c) {
        const auto lo = group[static_cast<std::size_t>(c)];
        const auto hi = n - 1 - lo;
        d.pairs[lo].lowering = {pairs[lo].lambda, VL.col(c), LadderRole::Lowering};
        d.pairs[lo].raising = {pairs[hi].lambda, W.col(c), LadderRole::Raising};
        done[lo] = 1;
      }
      continue;
    }

    // Zero-frequency cluster: split its eigenspace into symplectic pairs.
    std::vector<CVector> pool;
    for (const auto lo : group) {
      pool.push_back(pairs[lo].C);
      pool.push_back(pairs[n - 1 - lo].C);
    }
    for (const auto lo : group) {
      CVector e = pool.front();
      pool.erase(pool.begin());
      e.normalize();
      std::size_t best = 0;
      double best_abs = -1.0;
      for (std::size_t q = 0; q < pool.size(); ++q) {
        const double a = std::abs(omega(e, pool[q]));
        if (a > best_abs) {
          best_abs = a;
          best = q;
        }
      }
      if (best_abs < tol.min_commutator)
        throw ep_error("normalize_pairs: zero-frequency pair commutator vanishes", mu,
                       std::max(best_abs, 0.0));
      CVector f = pool[best] / omega(e, pool[best]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
      for (auto& z : pool) {
        const cplx zf = omega(z, f);
        const cplx ze = omega(z, e);
        z = z - zf * e + ze * f;
      }
      const auto hi = n - 1 - lo;
      d.pairs[lo].lowering = {pairs[lo].lambda, e, LadderRole::Lowering};
      d.pairs[lo].raising = {pairs[hi].lambda, f, LadderRole::Raising};
      done[lo] = 1;
    }
  }

  std::vector<cplx> all;
  d.frequencies.resize(K);
  cplx half_sum{0.0, 0.0};
  for (std::size_t i = 0; i < K; ++i) {
    d.frequencies[i] = d.pairs[i].raising.lambda;
    half_sum += 0.5 * d.frequencies[i];
    all.push_back(d.pairs[i].lowering.lambda);
    all.push_back(d.pairs[i].raising.lambda);
  }
  d.ground_energy = half_sum + offset;
  d.reality = reality_of(all, 1e-9);
  d.defective = false;
  return d;
}

SpectralDecomposition decompose(const QuadraticForm& form, const SpectralTolerances& tol) {
  const auto rep = adjoint_rep(form);
  return normalize_pairs(eigenpairs(rep, tol), commutator_matrix(form.basis()), form.offset(),
                         tol);
}

cplx spectrum(const SpectralDecomposition& decomp, const std::vector<unsigned>& occupations) {
  if (occupations.size() != decomp.modes)
    throw AlgebraError("spectrum: need one occupation number per mode (" +
                       std::to_string(decomp.modes) + ")");
  cplx e = decomp.offset;
  for (std::size_t i = 0; i < decomp.modes; ++i)
    e += decomp.frequencies[i] * (static_cast<double>(occupations[i]) + 0.5);
  return e;
}

Reality classify_reality(const AdjointRep& rep, double tol,
                         const SpectralTolerances& spectral_tol) {
  if (detect_ep(rep, spectral_tol).defective) return Reality::ExceptionalPoint;
  return reality_of(paired_eigenvalues(rep, spectral_tol), tol);
}

QuadraticForm reconstruct_form(const SpectralDecomposition& decomp) {
  const auto K = decomp.modes;
  const auto n = static_cast<Eigen::Index>(2 * K);
  CMatrix G = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < K; ++i) {
    const auto& lo = decomp.pairs[i].lowering.C;
    const auto& hi = decomp.pairs[i].raising.C;
    G += 0.5 * decomp.frequencies[i] * (lo * hi.transpose() + hi * lo.transpose());
  }
  return QuadraticForm(BosonBasis(K), G, decomp.offset);
}

double min_pairwise_gap(const std::vector<cplx>& lambdas) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = i + 1; j < lambdas.size(); ++j)
      gap = std::min(gap, std::abs(lambdas[i] - lambdas[j]));
  return gap;
}

}  // namespace qboson
