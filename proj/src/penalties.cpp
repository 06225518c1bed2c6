#include "equal/penalties.hpp"

#include <cmath>

#include "equal/admm.hpp"

namespace equal {

PenaltySpec PenaltySpec::lasso(double lambda, bool penalize_diagonal) {
  PenaltySpec spec;
  spec.family = PenaltyFamily::Lasso;
  spec.lambda = lambda;
  spec.penalize_diagonal = penalize_diagonal;
  return spec;
}

PenaltySpec PenaltySpec::scad(double lambda, double tau) {
  PenaltySpec spec;
  spec.family = PenaltyFamily::Scad;
  spec.lambda = lambda;
  spec.tau = tau;
  return spec;
}

PenaltySpec PenaltySpec::mcp(double lambda, double tau) {
  PenaltySpec spec;
  spec.family = PenaltyFamily::Mcp;
  spec.lambda = lambda;
  spec.tau = tau;
  return spec;
}

void PenaltySpec::validate(Index p) const {
  if (!(lambda >= 0.0)) throw InvalidInput("penalty: lambda must be >= 0");
  if (family == PenaltyFamily::Scad && !(tau > 2.0)) {
    throw InvalidInput("penalty: SCAD requires tau > 2");
  }
  if (family == PenaltyFamily::Mcp && !(tau > 1.0)) {
    throw InvalidInput("penalty: MCP requires tau > 1");
  }
  if (weights) {
    if (weights->rows() != p || weights->cols() != p) {
      throw InvalidInput("penalty: weight matrix must be p x p");
    }
    if (!weights->allFinite() || (weights->array() < 0.0).any()) {
      throw InvalidInput("penalty: weights must be finite and >= 0");
    }
  }
}

double scad_derivative(double x, double lambda, double tau) {
  const double ax = std::abs(x);
  if (ax <= lambda) return lambda;
  if (ax <= tau * lambda) return (tau * lambda - ax) / (tau - 1.0);
  return 0.0;
}

double mcp_derivative(double x, double lambda, double tau) {
  const double ax = std::abs(x);
  if (ax > tau * lambda) return 0.0;
  return std::max(lambda - ax / tau, 0.0);
}

double penalty_derivative(PenaltyFamily family, double x, double lambda,
                          double tau) {
  switch (family) {
    case PenaltyFamily::Lasso:
      return lambda;
    case PenaltyFamily::Scad:
      return scad_derivative(x, lambda, tau);
    case PenaltyFamily::Mcp:
      return mcp_derivative(x, lambda, tau);
  }
  throw InvalidInput("unknown penalty family");
}

Matrix lla_weights(const Matrix& initial, PenaltyFamily family, double lambda,
                   double tau) {
  if (initial.rows() != initial.cols()) {
    throw InvalidInput("lla_weights: initial estimate must be square");
  }
  const Index p = initial.rows();
  if (family == PenaltyFamily::Lasso) return Matrix::Ones(p, p);
  if (!(lambda > 0.0)) {
    throw InvalidInput("lla_weights: lambda = 0 leaves the nonconvex weights "
                       "undefined");
  }
  Matrix w(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      w(i, j) = penalty_derivative(family, initial(i, j), lambda, tau) / lambda;
    }
  }
  return w;
}

FitResult lla_refit(const ThinSVD& svd, const FitResult& initial,
                    PenaltyFamily family, double lambda, double tau,
                    const AdmmConfig& cfg) {
  PenaltySpec penalty;
  penalty.family = PenaltyFamily::Lasso;
  penalty.lambda = lambda;
  penalty.weights = lla_weights(initial.estimate, family, lambda, tau);
  penalty.penalize_diagonal = false;
  return fit(svd, penalty, cfg);
}

}  // namespace equal
