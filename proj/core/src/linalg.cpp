#include "qboson/linalg.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SVD>

namespace qboson::linalg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Plane rotation R = [[c, s], [-conj(s), c]] with R [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s{0.0, 0.0};

  static Givens zeroing(cplx a, cplx b) {
    Givens g;
    if (b == cplx{0.0, 0.0}) return g;
    if (a == cplx{0.0, 0.0}) {
      g.c = 0.0;
      g.s = std::conj(b) / std::abs(b);
      return g;
    }
    const double aa = std::abs(a);
    const double norm = std::hypot(aa, std::abs(b));
    g.c = aa / norm;
    g.s = (a / aa) * std::conj(b) / norm;
    return g;
  }

  // rows p, q of M (columns [c0, M.cols())) <- R * rows
  void apply_left(CMatrix& M, Eigen::Index p, Eigen::Index q, Eigen::Index c0) const {
    for (Eigen::Index k = c0; k < M.cols(); ++k) {
      const cplx x = M(p, k);
      const cplx y = M(q, k);
      M(p, k) = c * x + s * y;
      M(q, k) = -std::conj(s) * x + c * y;
    }
  }

  // columns p, q of M (rows [0, r1)) <- columns * R^H
  void apply_right(CMatrix& M, Eigen::Index p, Eigen::Index q, Eigen::Index r1) const {
    for (Eigen::Index k = 0; k < r1; ++k) {
      const cplx x = M(k, p);
      const cplx y = M(k, q);
      M(k, p) = c * x + std::conj(s) * y;
      M(k, q) = -s * x + c * y;
    }
  }
};

void hessenberg_reduce(CMatrix& A, CMatrix& Q) {
  const auto n = A.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const auto len = n - k - 1;
    CVector v = A.block(k + 1, k, len, 1);
    const double xnorm = v.norm();
    if (xnorm == 0.0) continue;
    const cplx phase = std::abs(v(0)) == 0.0 ? cplx{1.0, 0.0} : v(0) / std::abs(v(0));
    const cplx alpha = -phase * xnorm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // P = I - 2 v v^H applied from both sides.
    auto rows = A.bottomRows(len);
    rows -= 2.0 * v * (v.adjoint() * rows);
    auto cols = A.rightCols(len);
    cols -= 2.0 * (cols * v) * v.adjoint();
    auto qcols = Q.rightCols(len);
    qcols -= 2.0 * (qcols * v) * v.adjoint();
    A(k + 1, k) = alpha;
    A.block(k + 2, k, len - 1, 1).setZero();
  }
}

bool negligible_subdiagonal(const CMatrix& T, Eigen::Index i, double anorm) {
  const double sd = abs1(T(i + 1, i));
  double d = abs1(T(i, i)) + abs1(T(i + 1, i + 1));
  if (d == 0.0) d = anorm;
  const double smallnum = DBL_MIN * (static_cast<double>(T.rows()) / kEps);
  return sd <= std::max(kEps * d, smallnum);
}

cplx wilkinson_shift(const CMatrix& T, Eigen::Index iu, int iter) {
  if (iter == 10 || iter == 30) {
    double e = std::abs(T(iu, iu - 1).real());
    if (iu >= 2) e += std::abs(T(iu - 1, iu - 2).real());
    return T(iu, iu) + e;
  }
  Eigen::Matrix2cd t = T.block(iu - 1, iu - 1, 2, 2);
  const double scale = t.cwiseAbs().sum();
  if (scale == 0.0) return {0.0, 0.0};
  t /= scale;
  const cplx b = t(0, 1) * t(1, 0);
  const cplx c = t(0, 0) - t(1, 1);
  const cplx disc = std::sqrt(c * c + 4.0 * b);
  const cplx det = t(0, 0) * t(1, 1) - b;
  const cplx trace = t(0, 0) + t(1, 1);
  cplx ev1 = (trace + disc) / 2.0;
  cplx ev2 = (trace - disc) / 2.0;
  if (abs1(ev1) > abs1(ev2)) {
    if (ev1 != cplx{0.0, 0.0}) ev2 = det / ev1;
  } else if (ev2 != cplx{0.0, 0.0}) {
    ev1 = det / ev2;
  }
  const cplx pick = std::abs(ev1 - t(1, 1)) < std::abs(ev2 - t(1, 1)) ? ev1 : ev2;
  return scale * pick;
}

// Gauss-Legendre nodes and weights on [0, 1].
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (std::size_t i = 0; i < N; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(N) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t k = 2; k <= N; ++k) {
          const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(N) * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = 0.5 * (1.0 - z);
      w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

template <typename Matrix>
Matrix pade_expm(const Matrix& A, int degree) {
  static constexpr std::array<double, 4> b3{120., 60., 12., 1.};
  static constexpr std::array<double, 6> b5{30240., 15120., 3360., 420., 30., 1.};
  static constexpr std::array<double, 8> b7{17297280., 8648640., 1995840., 277200.,
                                            25200.,    1512.,    56.,      1.};
  static constexpr std::array<double, 10> b9{17643225600., 8821612800., 2075673600.,
                                             302702400.,   30270240.,   2162160.,
                                             110880.,      3960.,       90.,
                                             1.};
  const auto n = A.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = A * A;
  const double* b = nullptr;
  switch (degree) {
    case 3: b = b3.data(); break;
    case 5: b = b5.data(); break;
    case 7: b = b7.data(); break;
    default: b = b9.data(); break;
  }
  Matrix Upoly = b[1] * I;
  Matrix V = b[0] * I;
  Matrix P = I;
  for (int k = 2; k <= degree; k += 2) {
    P = P * A2;
    V += b[k] * P;
    Upoly += b[k + 1] * P;
  }
  const Matrix U = A * Upoly;
  return (V - U).partialPivLu().solve(V + U);
}

template <typename Matrix>
Matrix expm_impl(const Matrix& A) {
  const auto n = A.rows();
  if (n == 0) return A;
  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  static constexpr std::array<std::pair<int, double>, 4> small{
      {{3, 1.495585217958292e-2},
       {5, 2.539398330063230e-1},
       {7, 9.504178996162932e-1},
       {9, 2.097847961257068e0}}};
  for (const auto& [deg, theta] : small)
    if (norm1 <= theta) return pade_expm(A, deg);

  constexpr double theta13 = 5.371920351148152;
  static constexpr std::array<double, 14> b{64764752532480000.,
                                            32382376266240000.,
                                            7771770303897600.,
                                            1187353796428800.,
                                            129060195264000.,
                                            10559470521600.,
                                            670442572800.,
                                            33522128640.,
                                            1323241920.,
                                            40840800.,
                                            960960.,
                                            16380.,
                                            182.,
                                            1.};
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Matrix As = A / std::ldexp(1.0, s);
  const Matrix I = Matrix::Identity(n, n);
  const Matrix A2 = As * As;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  const Matrix U =
      As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
            b[1] * I);
  const Matrix V =
      A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  Matrix R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

}  // namespace

SchurForm complex_schur(const CMatrix& A) {
  if (A.rows() != A.cols()) throw AlgebraError("complex_schur: matrix must be square");
  const auto n = A.rows();
  SchurForm out{CMatrix::Identity(n, n), A, 0};
  if (n == 0) return out;
  if (!A.allFinite()) throw ConvergenceError("complex_schur: non-finite input");
  CMatrix& T = out.T;
  CMatrix& Q = out.Q;
  hessenberg_reduce(T, Q);
  const double anorm = std::max(T.cwiseAbs().maxCoeff(), DBL_MIN);

  const int max_total = 40 * static_cast<int>(n);
  Eigen::Index iu = n - 1;
  int iter = 0;
  while (true) {
    while (iu > 0 && negligible_subdiagonal(T, iu - 1, anorm)) {
      T(iu, iu - 1) = 0.0;
      iter = 0;
      --iu;
    }
    if (iu == 0) break;
    ++iter;
    if (++out.iterations > max_total)
      throw ConvergenceError("complex_schur: no deflation at index " + std::to_string(iu) +
                             " after " + std::to_string(out.iterations) + " QR sweeps");
    Eigen::Index il = iu - 1;
    while (il > 0 && !negligible_subdiagonal(T, il - 1, anorm)) --il;
    if (il > 0) T(il, il - 1) = 0.0;

    const cplx shift = wilkinson_shift(T, iu, iter);
    auto rot = Givens::zeroing(T(il, il) - shift, T(il + 1, il));
    rot.apply_left(T, il, il + 1, il);
    rot.apply_right(T, il, il + 1, std::min(il + 2, iu) + 1);
    rot.apply_right(Q, il, il + 1, n);
    for (Eigen::Index i = il + 1; i < iu; ++i) {
      rot = Givens::zeroing(T(i, i - 1), T(i + 1, i - 1));
      rot.apply_left(T, i, i + 1, i - 1);
      T(i + 1, i - 1) = 0.0;
      rot.apply_right(T, i, i + 1, std::min(i + 2, iu) + 1);
      rot.apply_right(Q, i, i + 1, n);
    }
  }
  // Strictly lower part is zero up to round-off of the deflation tests.
  T.triangularView<Eigen::StrictlyLower>().setZero();
  return out;
}

CVector eigenvalues(const CMatrix& A) { return complex_schur(A).T.diagonal(); }

CMatrix expm(const CMatrix& A) {
  if (A.rows() != A.cols()) throw AlgebraError("expm: matrix must be square");
  return expm_impl(A);
}

RMatrix expm(const RMatrix& A) {
  if (A.rows() != A.cols()) throw AlgebraError("expm: matrix must be square");
  return expm_impl(A);
}

CMatrix sqrtm_triangular(const CMatrix& T) {
  const auto n = T.rows();
  CMatrix R = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    R(j, j) = std::sqrt(T(j, j));
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      cplx acc = T(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= R(i, k) * R(k, j);
      const cplx denom = R(i, i) + R(j, j);
      if (denom == cplx{0.0, 0.0})
        throw BranchError("sqrtm_triangular: singular Sylvester step (repeated zero eigenvalue)");
      R(i, j) = acc / denom;
    }
  }
  return R;
}

CMatrix logm(const CMatrix& A) {
  if (A.rows() != A.cols()) throw AlgebraError("logm: matrix must be square");
  const auto n = A.rows();
  if (n == 0) return A;
  auto schur = complex_schur(A);
  CMatrix T = schur.T;
  const double scale = std::max(T.diagonal().cwiseAbs().maxCoeff(), DBL_MIN);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx z = T(i, i);
    if (std::abs(z) <= 1e-14 * scale ||
        (z.real() < 0.0 && std::abs(z.imag()) <= 1e-14 * std::abs(z)))
      throw BranchError("logm: eigenvalue " + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                        std::to_string(z.imag()) +
                        "i lies on the closed negative real axis; no principal logarithm");
  }
  const CMatrix I = CMatrix::Identity(n, n);
  int s = 0;
  while ((T - I).cwiseAbs().colwise().sum().maxCoeff() > 0.25) {
    T = sqrtm_triangular(T);
    if (++s > 64) throw ConvergenceError("logm: square-root iteration did not approach I");
  }
  static const GaussLegendre<16> gl;
  const CMatrix X = T - I;
  CMatrix L = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < 16; ++k) {
    const CMatrix M = I + gl.x[k] * X;
    L += gl.w[k] * M.triangularView<Eigen::Upper>().solve(X);
  }
  L *= std::ldexp(1.0, s);
  return schur.Q * L * schur.Q.adjoint();
}

int numerical_rank(const CMatrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

CMatrix null_space(const CMatrix& A, double rel_tol) {
  const auto n = A.cols();
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

double max_norm(const CMatrix& A) { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

double inf_norm(const CMatrix& A) {
  return A.size() == 0 ? 0.0 : A.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace qboson::linalg
