#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <cmath>

#include "equal/admm.hpp"
#include "equal/experiments.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace equal;
using equal::testing::max_abs;
using equal::testing::random_data;
using equal::testing::random_matrix;

namespace {

AdmmConfig tight(Loss loss) {
  AdmmConfig cfg;
  cfg.loss = loss;
  cfg.tol_abs = 1e-10;
  cfg.tol_rel = 1e-8;
  cfg.max_iter = 200000;
  return cfg;
}

DataMatrix identity_data(Index p) {
  // S = (1/p) X^T X = I when X = sqrt(p) I.
  return DataMatrix{std::sqrt(static_cast<double>(p)) *
                    Matrix::Identity(p, p)};
}

}  // namespace

TEST_CASE("fit: unpenalized L2 on identity covariance recovers I") {
  const Index p = 8;
  const ThinSVD svd = thin_svd_gram(identity_data(p));
  AdmmConfig cfg = tight(Loss::L2);
  const FitResult r = fit(svd, PenaltySpec::lasso(0.0), cfg);
  CHECK(r.converged);
  CHECK(max_abs(r.estimate - Matrix::Identity(p, p)) <= 1e-4);
}

TEST_CASE("fit: a large lambda zeroes every off-diagonal") {
  const DataMatrix x = random_data(15, 10, 61);
  const ThinSVD svd = thin_svd_gram(x);
  const Matrix s = sample_covariance(x);
  const double lambda = 10.0 * max_abs(s);
  for (const Loss loss : {Loss::L1, Loss::L2}) {
    AdmmConfig cfg;
    cfg.loss = loss;
    const FitResult r = fit(svd, PenaltySpec::lasso(lambda), cfg);
    for (Index i = 0; i < 10; ++i) {
      for (Index j = 0; j < 10; ++j) {
        if (i != j) CHECK(r.estimate(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("fit: L1 objective matches the proximal-gradient oracle") {
  const DataMatrix x = random_data(20, 6, 67);
  const ThinSVD svd = thin_svd_gram(x);
  const Matrix s = sample_covariance(x);
  const PenaltySpec penalty = PenaltySpec::lasso(0.2);

  const FitResult r = fit(svd, penalty, tight(Loss::L1));
  CHECK(r.converged);
  const auto oracle =
      testing::prox_grad_solve(s, Loss::L1, penalty, 1e-10, 2000000);
  CHECK(std::abs(r.objective - oracle.objective) <= 1e-6);
}

TEST_CASE("fit: warm start reuses the carried state") {
  const DataMatrix x = random_data(30, 12, 71);
  const ThinSVD svd = thin_svd_gram(x);
  AdmmConfig cfg;
  cfg.loss = Loss::L2;
  AdmmState state;
  const FitResult first = fit(svd, PenaltySpec::lasso(0.4), cfg, &state);
  const int k_first = state.k;
  const FitResult second = fit(svd, PenaltySpec::lasso(0.35), cfg, &state);
  CHECK(state.k > k_first);
  CHECK(second.iterations < first.iterations + 50);
  CHECK(state.a.rows() == 12);
}

TEST_CASE("objective: closed-form values") {
  const Index p = 5;
  const ThinSVD svd = thin_svd_gram(identity_data(p));
  const PenaltySpec none = PenaltySpec::lasso(0.0);
  CHECK(objective(Matrix::Zero(p, p), svd, none, Loss::L1) == 0.0);
  CHECK(objective(Matrix::Identity(p, p), svd, none, Loss::L1) ==
        doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(objective(Matrix::Identity(p, p), svd, none, Loss::L2) ==
        doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("objective: matches the vectorized Kronecker form") {
  const DataMatrix x = random_data(9, 5, 73);
  const ThinSVD svd = thin_svd_gram(x);
  const Matrix s = sample_covariance(x);
  const Matrix omega = random_matrix(5, 5, 79);
  const PenaltySpec penalty = PenaltySpec::lasso(0.3);

  const Vector beta = testing::vec(omega);
  Vector b = Vector::Zero(25);
  for (Index i = 0; i < 5; ++i) b(i * 5 + i) = 1.0;

  for (const Loss loss : {Loss::L1, Loss::L2}) {
    const Matrix h = loss == Loss::L1 ? testing::kron_system_l1(s, 0.0)
                                      : testing::kron_system_l2(s, 0.0);
    const double ref = 0.5 * beta.dot(h * beta) - beta.dot(b) +
                       0.3 * beta.cwiseAbs().sum();
    CHECK(std::abs(objective(omega, svd, penalty, loss) - ref) <= 1e-10);
    CHECK(std::abs(objective(omega, s, penalty, loss) - ref) <= 1e-10);
  }
}

TEST_CASE("kkt_residual: zero at the unpenalized stationary point") {
  const DataMatrix x = random_data(30, 5, 83);
  const ThinSVD svd = thin_svd_gram(x);
  const Matrix s = sample_covariance(x);
  const Matrix omega = s.fullPivLu().inverse();
  const PenaltySpec none = PenaltySpec::lasso(0.0);
  CHECK(kkt_residual(omega, svd, none, Loss::L1) <= 1e-8);
  CHECK(kkt_residual(omega, svd, none, Loss::L2) <= 1e-8);
}

TEST_CASE("kkt_residual: zero matrix against the subgradient band") {
  const Index p = 4;
  const ThinSVD svd = thin_svd_gram(identity_data(p));
  const Matrix zero = Matrix::Zero(p, p);
  // G(0) = -I: diagonal violations are max(1 - lambda, 0).
  CHECK(kkt_residual(zero, svd, PenaltySpec::lasso(1.0), Loss::L1) == 0.0);
  CHECK(kkt_residual(zero, svd, PenaltySpec::lasso(0.25), Loss::L2) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("kkt_residual: small after a tight fit") {
  const DataMatrix x = random_data(24, 8, 89);
  const ThinSVD svd = thin_svd_gram(x);
  for (const Loss loss : {Loss::L1, Loss::L2}) {
    const FitResult r = fit(svd, PenaltySpec::lasso(0.15), tight(loss));
    CHECK(r.converged);
    CHECK(r.kkt_residual <= 1e-4);
  }
}

TEST_CASE("fit: converged fits meet the 10x tol_abs stationarity bound") {
  std::uint64_t seed = 600;
  for (int inst = 0; inst < 6; ++inst) {
    const Index p = 4 + (inst % 3) * 2;
    const DataMatrix x = random_data(3 * p, p, ++seed);
    const ThinSVD svd = thin_svd_gram(x);
    AdmmConfig cfg;
    cfg.loss = inst % 2 == 0 ? Loss::L1 : Loss::L2;
    cfg.tol_abs = 1e-7;
    cfg.tol_rel = 1e-12;
    cfg.max_iter = 500000;
    const FitResult r = fit(svd, PenaltySpec::lasso(0.2), cfg);
    CHECK(r.converged);
    CHECK(r.kkt_residual <= 10.0 * cfg.tol_abs);
  }
}

TEST_CASE("fit: symmetry guarantees") {
  const DataMatrix x = random_data(12, 9, 97);
  const ThinSVD svd = thin_svd_gram(x);
  AdmmConfig cfg;
  cfg.loss = Loss::L2;
  const FitResult equals = fit(svd, PenaltySpec::lasso(0.1), cfg);
  CHECK(max_abs(equals.estimate - equals.estimate.transpose()) == 0.0);

  cfg.loss = Loss::L1;
  const FitResult equal_fit = fit(svd, PenaltySpec::lasso(0.1), cfg);
  CHECK(max_abs(equal_fit.estimate - equal_fit.estimate.transpose()) == 0.0);
}

TEST_CASE("fit: converged objective never exceeds the identity start") {
  std::uint64_t seed = 700;
  for (int inst = 0; inst < 8; ++inst) {
    const Index p = 4 + (inst % 4);
    const DataMatrix x = random_data(2 * p, p, ++seed);
    const ThinSVD svd = thin_svd_gram(x);
    AdmmConfig cfg;
    cfg.loss = inst % 2 == 0 ? Loss::L1 : Loss::L2;
    const PenaltySpec penalty = PenaltySpec::lasso(0.1 + 0.1 * (inst % 3));
    const FitResult r = fit(svd, penalty, cfg);
    CHECK(r.converged);
    CHECK(objective(r.estimate, svd, penalty, cfg.loss) <=
          objective(Matrix::Identity(p, p), svd, penalty, cfg.loss) + 1e-8);
  }
}

TEST_CASE("lambda_grid: substitution of the endpoint rule") {
  Matrix s = Matrix::Zero(100, 100);
  s(0, 0) = 0.9;
  const Vector grid = lambda_grid(s, 100, 2);
  CHECK(grid(0) == 0.9);
  CHECK(grid(1) ==
        doctest::Approx(0.9 * std::sqrt(std::log(100.0) / 100.0))
            .epsilon(1e-14));
}

TEST_CASE("lambda_grid: 50 values, exact endpoints, strictly descending") {
  const DataMatrix x = random_data(80, 40, 101);
  const Matrix s = sample_covariance(x);
  const Vector grid = lambda_grid(s, 80, 50);
  REQUIRE(grid.size() == 50);
  CHECK(grid(0) == max_abs(s));
  CHECK(grid(49) == max_abs(s) * std::sqrt(std::log(40.0) / 80.0));
  for (Index i = 0; i + 1 < 50; ++i) CHECK(grid(i) > grid(i + 1));
}

TEST_CASE("lambda_grid: guards") {
  Matrix s = Matrix::Identity(200, 200);
  CHECK_THROWS_AS(lambda_grid(s, 5, 10), InvalidInput);  // sqrt(log p / n) > 1
  CHECK_THROWS_AS(lambda_grid(Matrix::Zero(10, 10), 100, 10), InvalidInput);
  CHECK_THROWS_AS(lambda_grid(Matrix::Identity(10, 10), 100, 1), InvalidInput);
}

TEST_CASE("solution_path: single-lambda grid equals one fit") {
  const DataMatrix x = random_data(25, 10, 103);
  const ThinSVD svd = thin_svd_gram(x);
  AdmmConfig cfg;
  cfg.loss = Loss::L2;
  Vector grid(1);
  grid << 0.3;
  const SolutionPath path = solution_path(svd, grid, PenaltySpec::lasso(0.0),
                                          cfg);
  const FitResult direct = fit(svd, PenaltySpec::lasso(0.3), cfg);
  REQUIRE(path.fits.size() == 1);
  CHECK(max_abs(path.fits[0].estimate - direct.estimate) == 0.0);
  CHECK(path.sparsity(0) == sparsity_per_row(direct.estimate));
}

TEST_CASE("solution_path: warm starts agree with cold fits") {
  const PrecisionModel model = gen_case2(20);
  const DataMatrix x = sample_gaussian(model, 60, 5);
  const ThinSVD svd = thin_svd_gram(x);
  const Matrix s = sample_covariance(x);
  const Vector grid = lambda_grid(s, 60, 10);
  AdmmConfig cfg;
  cfg.loss = Loss::L2;
  cfg.tol_abs = 1e-8;
  cfg.tol_rel = 1e-6;
  cfg.max_iter = 50000;

  const SolutionPath path =
      solution_path(svd, grid, PenaltySpec::lasso(0.0), cfg);
  for (Index i = 0; i < grid.size(); ++i) {
    const FitResult cold = fit(svd, PenaltySpec::lasso(grid(i)), cfg);
    CHECK(std::abs(path.fits[static_cast<std::size_t>(i)].objective -
                   cold.objective) <= 1e-5);
  }
}

TEST_CASE("solution_path: everything off-diagonal is culled at lambda_max") {
  const PrecisionModel model = gen_case2(20);
  const DataMatrix x = sample_gaussian(model, 60, 9);
  const ThinSVD svd = thin_svd_gram(x);
  const Vector grid = lambda_grid(sample_covariance(x), 60, 5);
  AdmmConfig cfg;
  cfg.loss = Loss::L2;
  const SolutionPath path =
      solution_path(svd, grid, PenaltySpec::lasso(0.0), cfg);
  CHECK(path.sparsity(0) == 0.0);
}

TEST_CASE("walk_path: rejects an ascending grid") {
  const DataMatrix x = random_data(10, 5, 107);
  const ThinSVD svd = thin_svd_gram(x);
  Vector bad(2);
  bad << 0.1, 0.2;
  AdmmConfig cfg;
  CHECK_THROWS_AS(
      walk_path(svd, bad, PenaltySpec::lasso(0.0), cfg,
                [](Index, const FitResult&) {}),
      InvalidInput);
}
