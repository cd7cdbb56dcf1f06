#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "qboson/linalg.hpp"
#include "qboson/spectral.hpp"
#include "qboson/swanson.hpp"
#include "test_support.hpp"

using namespace qboson;

namespace {

void check_pairing(const std::vector<cplx>& l) {
  const std::size_t n = l.size(), K = n / 2;
  for (std::size_t i = 0; i < K; ++i) {
    CHECK(std::abs(l[i] + l[n - 1 - i]) < 1e-9 * std::max(1.0, std::abs(l[i])));
    CHECK((l[i].real() < 0.0 || (l[i].real() == 0.0 && l[i].imag() <= 0.0)));
  }
  for (std::size_t i = 1; i < K; ++i)
    CHECK((l[i - 1].real() < l[i].real() ||
           (l[i - 1].real() == l[i].real() && l[i - 1].imag() <= l[i].imag())));
}

void check_ladders(const SpectralDecomposition& d, const CommutatorMatrix& U, double tol) {
  const std::size_t K = d.modes;
  std::vector<CVector> Z(2 * K);
  for (std::size_t i = 0; i < K; ++i) {
    Z[i] = d.pairs[i].lowering.C;
    Z[2 * K - 1 - i] = d.pairs[i].raising.C;
  }
  for (std::size_t i = 0; i < 2 * K; ++i)
    for (std::size_t j = 0; j < 2 * K; ++j) {
      const cplx c = commutator_linear(Z[i], Z[j], U);
      cplx expect{0.0, 0.0};
      if (i + j == 2 * K - 1) expect = i < K ? 1.0 : -1.0;
      CHECK(std::abs(c - expect) < tol);
    }
}

}  // namespace

TEST_CASE("one-mode paired eigenvalues match the closed form") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    const swanson::OneModeParams p{testing::random_complex(rng, 2.0), testing::random_complex(rng, 2.0)};
    const auto l = paired_eigenvalues(adjoint_rep(swanson::one_mode(p)));
    const auto [lo, hi] = swanson::one_mode_lambdas(p);
    REQUIRE(l.size() == 2);
    check_pairing(l);
    // closed-form lambdas up to the sign convention for the lowering member
    const bool match = std::abs(l[0] - lo) < 1e-10 * std::max(1.0, std::abs(lo)) ||
                       std::abs(l[0] - hi) < 1e-10 * std::max(1.0, std::abs(hi));
    CHECK(match);
  }
}

TEST_CASE("paired eigenvalues for random forms agree with Eigen") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 4);
    const QuadraticForm f(BosonBasis(K), testing::random_symmetric(rng, K));
    const auto rep = adjoint_rep(f);
    const auto l = paired_eigenvalues(rep);
    check_pairing(l);
    const Eigen::ComplexEigenSolver<CMatrix> ref(rep.H, false);
    for (const auto& x : l) {
      double best = 1e300;
      for (Eigen::Index j = 0; j < ref.eigenvalues().size(); ++j)
        best = std::min(best, std::abs(x - ref.eigenvalues()(j)));
      CHECK(best < 1e-9 * std::max(1.0, linalg::max_norm(rep.H)));
    }
  }
}

TEST_CASE("paired eigenvalues reject non-regular input") {
  CMatrix H = CMatrix::Zero(2, 2);
  H(0, 0) = 1.0;
  H(1, 1) = 2.0;
  CHECK_THROWS_AS(paired_eigenvalues(AdjointRep{H}), PairingError);
  CHECK_THROWS_AS(paired_eigenvalues(AdjointRep{CMatrix::Zero(3, 3)}), AlgebraError);
}

TEST_CASE("decompose: real Swanson point") {
  const auto f = swanson::one_mode({0.3, 0.5});
  const auto d = decompose(f);
  CHECK(d.modes == 1);
  CHECK(d.reality == Reality::AllReal);
  CHECK_FALSE(d.defective);
  CHECK(std::abs(d.frequencies[0] - std::sqrt(0.4)) < 1e-12);
  CHECK(std::abs(d.ground_energy - std::sqrt(0.4) / 2.0) < 1e-12);
  CHECK(std::abs(spectrum(d, {3}) - 3.5 * std::sqrt(0.4)) < 1e-12);
  check_ladders(d, commutator_matrix(f.basis()), 1e-12);
  CHECK(std::abs(d.pairs[0].lowering.C.norm() - 1.0) < 1e-14);
  const auto back = reconstruct_form(d);
  CHECK(linalg::max_norm(back.G() - f.G()) < 1e-12);
  CHECK(std::abs(back.offset() - f.offset()) < 1e-12);
}

TEST_CASE("decompose: two-mode reference point") {
  const auto f = swanson::two_mode({0.3, 0.5, 0.2});
  const auto d = decompose(f);
  REQUIRE(d.frequencies.size() == 2);
  const double rp = std::sqrt(1.44 - 0.6), rm = std::sqrt(0.64 - 0.6);
  CHECK(std::abs(d.frequencies[0] - rp) < 1e-12);
  CHECK(std::abs(d.frequencies[1] - rm) < 1e-12);
  CHECK(std::abs(d.ground_energy - (rp + rm) / 2.0) < 1e-12);
  CHECK(d.reality == Reality::AllReal);
  check_ladders(d, commutator_matrix(f.basis()), 1e-10);
}

TEST_CASE("ladder operators satisfy [H, Z] = lambda Z") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 4);
    const QuadraticForm f(BosonBasis(K), testing::random_symmetric(rng, K));
    const auto rep = adjoint_rep(f);
    const auto d = decompose(f);
    const auto U = commutator_matrix(f.basis());
    for (const auto& pr : d.pairs)
      for (const auto* z : {&pr.lowering, &pr.raising}) {
        const double s = std::max(1.0, z->C.norm()) * std::max(1.0, linalg::max_norm(rep.H));
        CHECK(linalg::max_norm(rep.H * z->C - z->lambda * z->C) < 1e-9 * s);
      }
    check_ladders(d, U, 1e-8);
    const auto back = reconstruct_form(d);
    CHECK(linalg::max_norm(back.G() - f.G()) < 1e-8 * std::max(1.0, linalg::max_norm(f.G())));
    cplx half{0.0, 0.0};
    for (const auto& w : d.frequencies) half += 0.5 * w;
    CHECK(std::abs(d.ground_energy - (half + d.offset)) < 1e-14 * std::max(1.0, std::abs(half)));
  }
}

TEST_CASE("complex frequencies are classified as complex") {
  const auto f = swanson::one_mode({1.0, 1.0});  // 1 - 4 = -3
  const auto d = decompose(f);
  CHECK(d.reality == Reality::Complex);
  CHECK(std::abs(std::abs(d.frequencies[0].imag()) - std::sqrt(3.0)) < 1e-12);
  CHECK(classify_reality(adjoint_rep(f)) == Reality::Complex);
  CHECK(classify_reality(adjoint_rep(swanson::one_mode({0.1, 0.2}))) == Reality::AllReal);
  CHECK(to_string(Reality::AllReal) == "AllReal");
  CHECK(to_string(Reality::Complex) == "Complex");
  CHECK(to_string(Reality::ExceptionalPoint) == "ExceptionalPoint");
}

TEST_CASE("exceptional point: one mode at alpha beta = 1/4") {
  const auto rep = adjoint_rep(swanson::one_mode({0.5, 0.5}));
  const auto ep = detect_ep(rep);
  REQUIRE(ep.clusters.size() == 1);
  CHECK(std::abs(ep.clusters[0].lambda) < 1e-6);
  CHECK(ep.clusters[0].algebraic == 2);
  CHECK(ep.clusters[0].geometric == 1);
  CHECK(ep.defective);
  REQUIRE(ep.degenerate().has_value());
  CHECK(classify_reality(rep) == Reality::ExceptionalPoint);
  CHECK_THROWS_AS(decompose(swanson::one_mode({0.5, 0.5})), ExceptionalPointError);
  try {
    eigenpairs(rep);
    FAIL("expected ExceptionalPointError");
  } catch (const ExceptionalPointError& e) {
    REQUIRE(e.report().degenerate().has_value());
    CHECK(e.report().degenerate()->algebraic == 2);
    CHECK(e.report().degenerate()->geometric == 1);
  }
  const auto l = paired_eigenvalues(rep);
  CHECK(std::abs(l[0]) < 1e-6);
  CHECK(std::abs(l[1]) < 1e-6);
}

TEST_CASE("exceptional point: two modes on the (gamma-1)^2 locus") {
  const double g = 0.2;
  const double ab = swanson::two_mode_ep_locus(g).second;  // 0.16
  const auto rep = adjoint_rep(swanson::two_mode({0.4, ab / 0.4, g}));
  const auto ep = detect_ep(rep);
  REQUIRE(ep.degenerate().has_value());
  CHECK(std::abs(ep.degenerate()->lambda) < 1e-6);
  CHECK(ep.degenerate()->algebraic == 2);
  CHECK(ep.degenerate()->geometric == 1);
  CHECK(classify_reality(rep) == Reality::ExceptionalPoint);
}

TEST_CASE("diagonalizable degeneracy is not an exceptional point") {
  // two decoupled identical modes: +-w each twice, geometric = algebraic
  const auto f = swanson::two_mode({0.3, 0.5, 0.0});
  const auto rep = adjoint_rep(f);
  const auto ep = detect_ep(rep);
  CHECK_FALSE(ep.defective);
  REQUIRE(ep.clusters.size() == 2);
  for (const auto& c : ep.clusters) {
    CHECK(c.algebraic == 2);
    CHECK(c.geometric == 2);
  }
  const auto d = decompose(f);
  CHECK(std::abs(d.frequencies[0] - std::sqrt(0.4)) < 1e-12);
  CHECK(std::abs(d.frequencies[1] - std::sqrt(0.4)) < 1e-12);
  check_ladders(d, commutator_matrix(f.basis()), 1e-10);
  CHECK(linalg::max_norm(reconstruct_form(d).G() - f.G()) < 1e-10);
}

TEST_CASE("eigenpairs are unit norm and in paired order") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 50; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 3);
    const auto rep = adjoint_rep(QuadraticForm(BosonBasis(K), testing::random_symmetric(rng, K)));
    const auto ep = eigenpairs(rep);
    const auto l = paired_eigenvalues(rep);
    REQUIRE(ep.size() == l.size());
    for (std::size_t i = 0; i < ep.size(); ++i) {
      CHECK(std::abs(ep[i].C.norm() - 1.0) < 1e-12);
      CHECK(std::abs(ep[i].lambda - l[i]) < 1e-9 * std::max(1.0, std::abs(l[i])));
    }
  }
}

TEST_CASE("min pairwise gap") {
  CHECK(min_pairwise_gap({cplx{0, 0}, cplx{3, 0}, cplx{1, 0}}) == doctest::Approx(1.0));
  CHECK(min_pairwise_gap({cplx{0, 0}, cplx{0, 2}}) == doctest::Approx(2.0));
  CHECK(std::isinf(min_pairwise_gap({cplx{1, 0}})));
}

TEST_CASE("exceptional point: alpha = beta = 1/4, gamma = 1/2") {
  const auto rep = adjoint_rep(swanson::two_mode({0.25, 0.25, 0.5}));
  const auto ep = detect_ep(rep);
  REQUIRE(ep.clusters.size() == 1);
  CHECK(ep.defective);
  CHECK(std::abs(ep.clusters[0].lambda) < 1e-6);
  const auto l = paired_eigenvalues(rep);
  CHECK(std::abs(l[0] + std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(l[3] - std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(l[1]) < 1e-6);

  CMatrix H(2, 2);
  H << -1, 1, -1, 1;
  CHECK(linalg::max_norm(adjoint_rep(swanson::one_mode({0.5, 0.5})).H - H) == 0.0);
  CHECK_FALSE(detect_ep(adjoint_rep(swanson::one_mode({0.3, 0.5}))).defective);
  CHECK(detect_ep(adjoint_rep(swanson::one_mode({0.3, 0.5}))).clusters.empty());
}

TEST_CASE("classify_reality agrees with the sign of sqrt(1 - 4 alpha beta)") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 1000; ++t) {
    const swanson::OneModeParams p{testing::random_complex(rng, 2.0), testing::random_complex(rng, 2.0)};
    const cplx r = std::sqrt(1.0 - 4.0 * p.alpha * p.beta);
    if (std::abs(r) < 1e-3) continue;
    const auto got = classify_reality(adjoint_rep(swanson::one_mode(p)));
    const bool real = std::abs(r.imag()) < 1e-9 * std::max(1.0, std::abs(r));
    CHECK(got == (real ? Reality::AllReal : Reality::Complex));
  }
  // real alpha, beta straddling the curve
  CHECK(classify_reality(adjoint_rep(swanson::one_mode({0.5, 0.5 - 1e-4}))) == Reality::AllReal);
  CHECK(classify_reality(adjoint_rep(swanson::one_mode({0.5, 0.5 + 1e-4}))) == Reality::Complex);
}
