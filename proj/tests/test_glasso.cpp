#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <cmath>

#include "equal/experiments.hpp"
#include "equal/glasso.hpp"
#include "test_util.hpp"

using namespace equal;
using equal::testing::max_abs;
using equal::testing::random_symmetric;

TEST_CASE("glasso_omega_update: zero input maps to the identity") {
  const Matrix out = glasso_omega_update(Matrix::Zero(4, 4), 1.0);
  CHECK(max_abs(out - Matrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("glasso_omega_update: scalar case") {
  Matrix m(1, 1);
  m << 3.0;
  const Matrix out = glasso_omega_update(m, 1.0);
  CHECK(out(0, 0) ==
        doctest::Approx((3.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("glasso_omega_update: solves rho W - W^{-1} = M") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix m = random_symmetric(6, seed);
    for (const double rho : {0.5, 1.0, 2.0}) {
      const Matrix omega = glasso_omega_update(m, rho);
      const Matrix residual =
          rho * omega - omega.fullPivLu().inverse() - m;
      CHECK(max_abs(residual) <= 1e-8);
    }
  }
}

TEST_CASE("glasso_omega_update: guards") {
  Matrix skew(2, 2);
  skew << 0.0, 1.0, -1.0, 0.0;
  CHECK_THROWS_AS(glasso_omega_update(skew, 1.0), InvalidInput);
  CHECK_THROWS_AS(glasso_omega_update(Matrix::Zero(2, 2), 0.0), InvalidInput);
}

TEST_CASE("glasso eigenvalue map: pointwise identity on a lattice") {
  for (const double rho : {0.5, 1.0, 2.0}) {
    for (int a = -10; a <= 10; ++a) {
      const double x =
          (a + std::sqrt(static_cast<double>(a) * a + 4.0 * rho)) /
          (2.0 * rho);
      CHECK(x > 0.0);
      CHECK(std::abs(rho * x - 1.0 / x - a) <= 1e-10);
    }
  }
}

TEST_CASE("glasso updates are positive definite") {
  std::uint64_t seed = 50;
  for (int i = 0; i < 20; ++i) {
    const Matrix m = 3.0 * random_symmetric(5 + (i % 3) * 5, ++seed);
    const Matrix omega = glasso_omega_update(m, 1.0);
    CHECK(min_eigenvalue_sym(omega) > 0.0);
  }
}

TEST_CASE("eig_sym: orthogonality and reconstruction") {
  const Matrix m = random_symmetric(7, 77);
  const EigDecomp ed = eig_sym(m);
  CHECK(max_abs(ed.q * ed.q.transpose() - Matrix::Identity(7, 7)) <= 1e-10);
  CHECK(max_abs(ed.q * ed.a.asDiagonal() * ed.q.transpose() - m) <= 1e-8);
}

TEST_CASE("glasso_fit: unpenalized identity covariance recovers I") {
  AdmmConfig cfg;
  cfg.tol_abs = 1e-9;
  cfg.tol_rel = 1e-7;
  cfg.max_iter = 10000;
  const FitResult r = glasso_fit(Matrix::Identity(6, 6), 0.0, cfg);
  CHECK(r.converged);
  CHECK(max_abs(r.estimate - Matrix::Identity(6, 6)) <= 1e-4);
}

TEST_CASE("glasso_fit: a huge lambda zeroes the off-diagonals") {
  const PrecisionModel model = gen_case2(8);
  const DataMatrix x = sample_gaussian(model, 30, 3);
  const Matrix s = sample_covariance(x);
  AdmmConfig cfg;
  const FitResult r = glasso_fit(s, 10.0 * max_abs(s), cfg);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      if (i != j) CHECK(r.estimate(i, j) == 0.0);
    }
  }
}

TEST_CASE("glasso_fit: objective self-consistency across tolerances") {
  const PrecisionModel model = gen_case2(8);
  const DataMatrix x = sample_gaussian(model, 40, 11);
  const Matrix s = sample_covariance(x);
  const double lambda = 0.2;

  AdmmConfig loose;
  loose.tol_abs = 1e-6;
  loose.tol_rel = 1e-4;
  AdmmConfig strict;
  strict.tol_abs = 1e-10;
  strict.tol_rel = 1e-10;
  strict.max_iter = 100000;

  const FitResult a = glasso_fit(s, lambda, loose);
  const FitResult b = glasso_fit(s, lambda, strict);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.objective - b.objective) <= 1e-4);
}

TEST_CASE("glasso_fit: kkt residual tracks the tight solve") {
  const PrecisionModel model = gen_case2(6);
  const DataMatrix x = sample_gaussian(model, 30, 13);
  const Matrix s = sample_covariance(x);
  AdmmConfig strict;
  strict.tol_abs = 1e-10;
  strict.tol_rel = 1e-10;
  strict.max_iter = 200000;
  const FitResult r = glasso_fit(s, 0.15, strict);
  CHECK(r.converged);
  CHECK(r.kkt_residual <= 1e-6);
}
