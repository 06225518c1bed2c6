#pragma once

#include <optional>

#include "equal/matrix_core.hpp"

namespace equal {

enum class PenaltyFamily { Lasso, Scad, Mcp };

struct AdmmConfig;
struct FitResult;

// Elementwise penalty lambda * sum_ij W_ij |Omega_ij|. W defaults to all
// ones; setting penalize_diagonal = false zeroes the diagonal thresholds.
struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Lasso;
  double lambda = 0.0;
  double tau = 3.7;  // concavity; unused by Lasso
  std::optional<Matrix> weights;
  bool penalize_diagonal = true;

  static PenaltySpec lasso(double lambda, bool penalize_diagonal = true);
  static PenaltySpec scad(double lambda, double tau = 3.7);
  static PenaltySpec mcp(double lambda, double tau = 2.0);

  // Checks lambda >= 0, family-specific tau ranges, weight shape/sign.
  void validate(Index p) const;
};

// d/d|x| of the SCAD penalty: lambda on [0, lambda], linear decay to zero on
// (lambda, tau*lambda], zero beyond. Requires tau > 2.
double scad_derivative(double x, double lambda, double tau);

// d/d|x| of the MCP penalty: max(lambda - |x|/tau, 0) on [0, tau*lambda],
// zero beyond. Requires tau > 1.
double mcp_derivative(double x, double lambda, double tau);

// Dispatch on family; Lasso returns lambda for every x.
double penalty_derivative(PenaltyFamily family, double x, double lambda,
                          double tau);

// One-step local linear approximation weights W_ij = p'_lambda(initial_ij) /
// lambda, so the weighted threshold lambda * W_ij reproduces the linearized
// penalty exactly. lambda = 0 with a nonconvex family is undefined.
Matrix lla_weights(const Matrix& initial, PenaltyFamily family, double lambda,
                   double tau);

// One additional weighted ADMM solve at weights from the initial estimate.
// The linearized penalty excludes the diagonal.
FitResult lla_refit(const ThinSVD& svd, const FitResult& initial,
                    PenaltyFamily family, double lambda, double tau,
                    const AdmmConfig& cfg);

}  // namespace equal
