#pragma once

#include <functional>
#include <vector>

#include "equal/matrix_core.hpp"
#include "equal/penalties.hpp"

namespace equal {

// L1: tr(W^T S W)/2 - tr(W).  L2: tr(W S W^T)/4 + tr(W^T S W)/4 - tr(W).
enum class Loss { L1, L2 };

struct AdmmConfig {
  Loss loss = Loss::L2;
  double rho = 1.0;  // step size; the spectral weights are built once per rho
  int max_iter = 1000;
  double tol_abs = 1e-6;
  double tol_rel = 1e-4;

  void validate() const;
};

// Iterates of the splitting: Omega (smooth block), A (thresholded block),
// B (running scaled dual, B = Omega - A + B_prev after every step).
struct AdmmState {
  Matrix omega;
  Matrix a;
  Matrix b;
  int k = 0;
  double primal_res = 0.0;
  double dual_res = 0.0;
};

struct FitResult {
  Matrix estimate;  // symmetric output
  int iterations = 0;
  bool converged = false;
  // Objective and stationarity residual of the converged thresholded iterate
  // (the minimizer of the convex program, before L1's output symmetrization).
  double objective = 0.0;
  double kkt_residual = 0.0;
};

struct SolutionPath {
  Vector lambdas;               // strictly descending
  std::vector<FitResult> fits;  // one per lambda
  Vector sparsity;              // avg nonzero off-diagonals per row
};

// Runs the splitting loop: C = I + rho (A - B); Omega-update by the
// closed-form ridge solve for cfg.loss; A = soft(Omega + B, lambda W / rho);
// B += Omega - A. Starts from A = B = I unless `state` carries a matching
// warm start; `state` is updated in place when given. The L1 output is
// min-abs symmetrized, the L2 output is A itself.
// Hitting max_iter returns converged = false; non-finite or exploding
// iterates (|entry| > 1e8) throw NumericalError.
FitResult fit(const ThinSVD& svd, const PenaltySpec& penalty,
              const AdmmConfig& cfg, AdmmState* state = nullptr);

// Penalized objective L(omega) + lambda sum_ij W_ij |omega_ij|.
double objective(const Matrix& omega, const ThinSVD& svd,
                 const PenaltySpec& penalty, Loss loss);
double objective(const Matrix& omega, const Matrix& s,
                 const PenaltySpec& penalty, Loss loss);

// Max subgradient-condition violation: |G_ij + lambda W_ij sign(omega_ij)|
// on the support, max(|G_ij| - lambda W_ij, 0) off it, where G is the loss
// gradient (S Omega - I, resp. (S Omega + Omega S)/2 - I).
double kkt_residual(const Matrix& omega, const ThinSVD& svd,
                    const PenaltySpec& penalty, Loss loss);
double kkt_residual(const Matrix& omega, const Matrix& s,
                    const PenaltySpec& penalty, Loss loss);

// `count` log-spaced values from lambda_max = max |s_ij| down to
// lambda_max * sqrt(log(p)/n), inclusive, strictly descending. Errors when
// S is all zero or the floor factor reaches 1 (n too small for p).
Vector lambda_grid(const Matrix& s, Index n_samples, int count);

// Average count of off-diagonal entries with |entry| > tol, per row.
double sparsity_per_row(const Matrix& estimate, double tol = 1e-10);

// Fits the grid largest-lambda first, warm-starting each fit from the
// previous (A, B); streams results to `visit(index, fit)` without storing.
void walk_path(const ThinSVD& svd, const Vector& grid,
               const PenaltySpec& penalty_template, const AdmmConfig& cfg,
               const std::function<void(Index, const FitResult&)>& visit);

// walk_path, collecting fits and per-lambda sparsity.
SolutionPath solution_path(const ThinSVD& svd, const Vector& grid,
                           const PenaltySpec& penalty_template,
                           const AdmmConfig& cfg);

}  // namespace equal
