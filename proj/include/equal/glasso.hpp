#pragma once

#include "equal/admm.hpp"
#include "equal/matrix_core.hpp"

namespace equal {

// M = q diag(a) q^T with orthogonal q.
struct EigDecomp {
  Matrix q;
  Vector a;
};

EigDecomp eig_sym(const Matrix& m);

// Closed-form minimizer of rho W - W^{-1} = M over positive-definite W:
// eigenvalues a_i of M map to (a_i + sqrt(a_i^2 + 4 rho)) / (2 rho), which
// is strictly positive, so the update always returns a PD matrix.
Matrix glasso_omega_update(const Matrix& m, double rho);

// tr(S W) - log|W| + lambda ||W||_1; +inf when W is not positive definite.
double glasso_objective(const Matrix& s, const Matrix& omega, double lambda);

// Subgradient residual with G = S - W^{-1}; NaN when W is not PD.
double glasso_kkt_residual(const Matrix& s, const Matrix& omega,
                           double lambda);

// ADMM for the l1-penalized negative Gaussian log-likelihood, with the
// eigenvalue-map Omega-update and the same stopping rule as `fit`. Returns
// the thresholded iterate A. cfg.loss is ignored.
FitResult glasso_fit(const Matrix& s, double lambda, const AdmmConfig& cfg,
                     AdmmState* state = nullptr);

// Warm-started glasso fits over a descending grid, streamed like walk_path.
void walk_glasso_path(const Matrix& s, const Vector& grid,
                      const AdmmConfig& cfg,
                      const std::function<void(Index, const FitResult&)>& visit);

}  // namespace equal
