#include <random>

#include "doctest.h"
#include "qboson/algebra.hpp"
#include "qboson/linalg.hpp"
#include "qboson/swanson.hpp"
#include "test_support.hpp"

using namespace qboson;

TEST_CASE("commutator matrix has boson block form") {
  for (std::size_t K = 1; K <= 5; ++K) {
    const auto U = commutator_matrix(BosonBasis(K)).U;
    const auto n = static_cast<Eigen::Index>(2 * K);
    CHECK((U + U.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((U * U + RMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((U * U.transpose() - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0);
  }
  RMatrix one(2, 2);
  one << 0, 1, -1, 0;
  CHECK(commutator_matrix(BosonBasis(1)).U == one);
  CHECK_THROWS_AS(BosonBasis(0), AlgebraError);
}

TEST_CASE("basis labels follow annihilators-then-creators ordering") {
  BosonBasis b(2);
  CHECK(b.label(0) == "a1");
  CHECK(b.label(1) == "a2");
  CHECK(b.label(2) == "a1+");
  CHECK(b.label(3) == "a2+");
  CHECK(b.adjoint_index(1) == 3);
  CHECK(b.adjoint_index(2) == 0);
}

TEST_CASE("build_quadratic symmetrizes normal-ordered input") {
  const cplx alpha{0.3, 0.0}, beta{0.5, 0.0};
  // a^+ a + alpha a^2 + beta a^+2 + 1/2, worked by hand: 1/2 (a^+ a + a a^+) = a^+ a + 1/2.
  const auto f = build_quadratic(BosonBasis(1), {{1, 0, 1.0}, {0, 0, alpha}, {1, 1, beta}}, 0.5);
  CMatrix G(2, 2);
  G << alpha, 0.5, 0.5, beta;
  CHECK(linalg::max_norm(f.G() - G) == 0.0);
  CHECK(std::abs(f.offset()) == 0.0);

  const auto empty = build_quadratic(BosonBasis(2), {});
  CHECK(linalg::max_norm(empty.G()) == 0.0);
  CHECK(empty.offset() == cplx{0.0, 0.0});

  CHECK_THROWS_AS(build_quadratic(BosonBasis(1), {{2, 0, 1.0}}), AlgebraError);
}

TEST_CASE("two-mode terms symmetrize to the closed G and reproduce the regular matrix") {
  const cplx a{0.7, 0.2}, b{-0.4, 0.1};
  const double g = 0.9;
  const auto f = swanson::two_mode({a, b, g});
  CMatrix G(4, 4);
  G << a, 0, 0.5, g / 2, 0, a, g / 2, 0.5, 0.5, g / 2, b, 0, g / 2, 0.5, 0, b;
  CHECK(linalg::max_norm(f.G() - G) < 1e-15);
  CHECK(std::abs(f.offset()) < 1e-15);
}

TEST_CASE("QuadraticForm rejects non-symmetric G") {
  CMatrix G(2, 2);
  G << 1, 2, 3, 4;
  CHECK_THROWS_AS(QuadraticForm(BosonBasis(1), G), AlgebraError);
  CHECK_THROWS_AS(QuadraticForm(BosonBasis(2), CMatrix::Zero(2, 2)), AlgebraError);
}

TEST_CASE("adjoint representation of the one-mode model") {
  const cplx a{0.3, -0.2}, b{1.1, 0.4};
  const auto H = adjoint_rep(swanson::one_mode({a, b})).H;
  CMatrix expect(2, 2);
  expect << -1.0, 2.0 * a, -2.0 * b, 1.0;
  CHECK(linalg::max_norm(H - expect) == 0.0);
  CHECK(linalg::max_norm(adjoint_rep(QuadraticForm(BosonBasis(3), CMatrix::Zero(6, 6))).H) == 0.0);
}

TEST_CASE("adjoint representation of the two-mode model matches the 4x4 regular matrix") {
  const cplx a{1.0, 0.0}, b{2.0, 0.0};
  const double g = 3.0;
  const auto H = adjoint_rep(swanson::two_mode({a, b, g})).H;
  CMatrix expect(4, 4);
  expect << -1, -g, 2.0 * a, 0, -g, -1, 0, 2.0 * a, -2.0 * b, 0, 1, g, 0, -2.0 * b, g, 1;
  CHECK(linalg::max_norm(H - expect) < 1e-15);
}

TEST_CASE("commutator_linear") {
  const auto U = commutator_matrix(BosonBasis(1));
  CVector a(2), ad(2);
  a << 1, 0;
  ad << 0, 1;
  CHECK(commutator_linear(a, ad, U) == cplx{1.0, 0.0});
  CHECK(commutator_linear(ad, a, U) == cplx{-1.0, 0.0});
  CHECK_THROWS_AS(commutator_linear(CVector::Zero(3), a, U), AlgebraError);

  std::mt19937_64 rng(11);
  const auto U3 = commutator_matrix(BosonBasis(3));
  for (int t = 0; t < 50; ++t) {
    CVector x(6), y(6);
    for (int k = 0; k < 6; ++k) {
      x(k) = testing::random_complex(rng, 2.0);
      y(k) = testing::random_complex(rng, 2.0);
    }
    CHECK(std::abs(commutator_linear(x, x, U3)) < 1e-14);
    CHECK(std::abs(commutator_linear(x, y, U3) + commutator_linear(y, x, U3)) < 1e-13);
  }
}

TEST_CASE("Jacobi identity: U H is symmetric and the characteristic polynomial is even") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 4);
    const QuadraticForm f(BosonBasis(K), testing::random_symmetric(rng, K));
    const auto H = adjoint_rep(f).H;
    const CMatrix U = commutator_matrix(f.basis()).U.cast<cplx>();
    const CMatrix UH = U * H;
    CHECK(linalg::max_norm(UH - UH.transpose()) < 1e-13);
    CHECK(linalg::max_norm(U * H * U.inverse() + H.transpose()) < 1e-13);
    const auto c = characteristic_polynomial(H);
    double largest = 0.0;
    for (const auto& x : c) largest = std::max(largest, std::abs(x));
    for (std::size_t k = 1; k < c.size(); k += 2) CHECK(std::abs(c[k]) < 1e-10 * largest);
  }
}

TEST_CASE("characteristic polynomial against a hand-computed 2x2") {
  CMatrix A(2, 2);
  A << 1, 2, 3, 4;
  const auto c = characteristic_polynomial(A);  // l^2 - 5 l - 2
  CHECK(std::abs(c[0] - cplx{-2.0, 0.0}) < 1e-14);
  CHECK(std::abs(c[1] - cplx{-5.0, 0.0}) < 1e-14);
  CHECK(std::abs(c[2] - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("build_quadratic is idempotent on its own output") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 3);
    const QuadraticForm f(BosonBasis(K), testing::random_symmetric(rng, K),
                          testing::random_complex(rng, 1.0));
    std::vector<RawTerm> terms;
    for (std::size_t i = 0; i < 2 * K; ++i)
      for (std::size_t j = 0; j < 2 * K; ++j)
        terms.push_back({i, j, f.G()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    const auto again = build_quadratic(f.basis(), terms, f.offset());
    CHECK(linalg::max_norm(again.G() - f.G()) == 0.0);
    CHECK(std::abs(again.offset() - f.offset()) < 1e-15);
  }
}

TEST_CASE("transform_form: identity, the Swanson map, and isospectrality") {
  const swanson::OneModeParams p{0.3, 0.5};
  const auto f = swanson::one_mode(p);
  const auto same = transform_form(f, CanonicalMap{CMatrix::Identity(2, 2)});
  CHECK(linalg::max_norm(same.G() - f.G()) == 0.0);
  CHECK(same.offset() == f.offset());

  const auto t = transform_form(f, swanson::bogoliubov_map(p, 1.0));
  const double half = std::sqrt(0.4) / 2.0;
  CHECK(std::abs(t.G()(0, 0)) < 1e-12);
  CHECK(std::abs(t.G()(1, 1)) < 1e-12);
  CHECK(std::abs(t.G()(0, 1) - half) < 1e-12);
  CHECK(std::abs(t.offset()) < 1e-12);

  CMatrix bad(2, 2);
  bad << 2, 0, 0, 2;
  CHECK_THROWS_AS(transform_form(f, CanonicalMap{bad}), AlgebraError);
}

TEST_CASE("random canonical maps preserve the adjoint spectrum") {
  // S = exp(2 G_Q U)^t is canonical for any symmetric G_Q.
  std::mt19937_64 rng(19);
  for (int t = 0; t < 40; ++t) {
    const std::size_t K = 1 + static_cast<std::size_t>(t % 3);
    const QuadraticForm gen(BosonBasis(K), testing::random_symmetric(rng, K, 0.3));
    const CanonicalMap S{linalg::expm(adjoint_rep(gen).H).transpose()};
    REQUIRE(canonicality_defect(S) < 1e-12);
    const QuadraticForm f(BosonBasis(K), testing::random_symmetric(rng, K));
    const auto g = transform_form(f, S);
    Eigen::ComplexEigenSolver<CMatrix> e1(adjoint_rep(f).H, false), e2(adjoint_rep(g).H, false);
    std::vector<cplx> l1(e1.eigenvalues().data(), e1.eigenvalues().data() + 2 * K);
    std::vector<cplx> l2(e2.eigenvalues().data(), e2.eigenvalues().data() + 2 * K);
    // multiset match, brute force
    double worst = 0.0, scale = 1.0;
    for (const auto& x : l1) {
      double best = 1e300;
      for (const auto& y : l2) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
      scale = std::max(scale, std::abs(x));
    }
    CHECK(worst < 1e-10 * scale);
  }
}

TEST_CASE("PT conjugation and Hermiticity") {
  const auto real = swanson::one_mode({0.3, 0.5});
  CHECK(is_pt_symmetric(real));
  const auto cx = swanson::one_mode({cplx{0.3, 0.1}, 0.5});
  CHECK_FALSE(is_pt_symmetric(cx));
  const auto back = pt_conjugate(pt_conjugate(cx));
  CHECK(linalg::max_norm(back.G() - cx.G()) == 0.0);
  CHECK(linalg::max_norm(pt_conjugate(cx).G() - swanson::one_mode({cplx{0.3, -0.1}, 0.5}).G()) == 0.0);

  CHECK(is_hermitian(swanson::one_mode({cplx{0.2, 0.3}, cplx{0.2, -0.3}})));
  CHECK_FALSE(is_hermitian(swanson::one_mode({0.3, 0.5})));
  CHECK(is_hermitian(swanson::two_mode({cplx{0.1, 0.2}, cplx{0.1, -0.2}, 0.4})));
}
