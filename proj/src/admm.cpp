#include "equal/admm.hpp"

#include <algorithm>
#include <cmath>

#include "equal/ridge_solvers.hpp"

namespace equal {

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw InvalidInput("AdmmConfig: rho must be positive");
  if (max_iter < 1) throw InvalidInput("AdmmConfig: max_iter must be >= 1");
  if (!(tol_abs > 0.0) || !(tol_rel > 0.0)) {
    throw InvalidInput("AdmmConfig: tolerances must be positive");
  }
}

namespace {

constexpr double kDivergenceBound = 1e8;

// lambda * W / rho with the diagonal zeroed when unpenalized.
Matrix threshold_matrix(const PenaltySpec& penalty, Index p, double rho) {
  Matrix theta = penalty.weights
                     ? Matrix((penalty.lambda / rho) * (*penalty.weights))
                     : Matrix::Constant(p, p, penalty.lambda / rho);
  if (!penalty.penalize_diagonal) theta.diagonal().setZero();
  return theta;
}

// tr(M^T S M) through the factorization: sum_i tau_i ||row_i(U^T M)||^2.
double quad_form(const Matrix& m, const ThinSVD& svd) {
  const Matrix ut_m = svd.u.transpose() * m;
  return (ut_m.array().square().rowwise().sum() * svd.taus.array()).sum();
}

double penalty_value(const Matrix& omega, const PenaltySpec& penalty) {
  double sum;
  if (penalty.weights) {
    sum = penalty.weights->cwiseProduct(omega.cwiseAbs()).sum();
    if (!penalty.penalize_diagonal) {
      sum -= (penalty.weights->diagonal().array() *
              omega.diagonal().array().abs())
                 .sum();
    }
  } else {
    sum = omega.cwiseAbs().sum();
    if (!penalty.penalize_diagonal) sum -= omega.diagonal().cwiseAbs().sum();
  }
  return penalty.lambda * sum;
}

double loss_value(const Matrix& omega, const ThinSVD& svd, Loss loss) {
  if (loss == Loss::L1) {
    return 0.5 * quad_form(omega, svd) - omega.trace();
  }
  return 0.25 * quad_form(omega, svd) +
         0.25 * quad_form(omega.transpose(), svd) - omega.trace();
}

double loss_value(const Matrix& omega, const Matrix& s, Loss loss) {
  const Matrix s_omega = s * omega;
  const double quad = omega.cwiseProduct(s_omega).sum();  // tr(W^T S W)
  if (loss == Loss::L1) return 0.5 * quad - omega.trace();
  const Matrix omega_s = omega * s;
  const double quad_t = omega.cwiseProduct(omega_s).sum();  // tr(W S W^T)
  return 0.25 * quad + 0.25 * quad_t - omega.trace();
}

double kkt_from_gradient(const Matrix& omega, const Matrix& grad,
                         const PenaltySpec& penalty) {
  const Index p = omega.rows();
  double worst = 0.0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      double w = penalty.weights ? (*penalty.weights)(i, j) : 1.0;
      if (i == j && !penalty.penalize_diagonal) w = 0.0;
      const double lam = penalty.lambda * w;
      const double g = grad(i, j);
      const double o = omega(i, j);
      const double viol = o != 0.0 ? std::abs(g + (o > 0.0 ? lam : -lam))
                                   : std::max(std::abs(g) - lam, 0.0);
      worst = std::max(worst, viol);
    }
  }
  return worst;
}

Matrix loss_gradient(const Matrix& omega, const ThinSVD& svd, Loss loss) {
  // S Omega = U diag(taus) U^T Omega, never forming S.
  Matrix s_omega = svd.u * (svd.taus.asDiagonal() * (svd.u.transpose() * omega));
  Matrix grad;
  if (loss == Loss::L1) {
    grad = std::move(s_omega);
  } else {
    const Matrix s_omega_t =
        svd.u * (svd.taus.asDiagonal() * (svd.u.transpose() * omega.transpose()));
    grad = 0.5 * (s_omega + s_omega_t.transpose());
  }
  grad.diagonal().array() -= 1.0;
  return grad;
}

Matrix loss_gradient(const Matrix& omega, const Matrix& s, Loss loss) {
  Matrix grad;
  if (loss == Loss::L1) {
    grad = s * omega;
  } else {
    grad = 0.5 * (s * omega + omega * s);
  }
  grad.diagonal().array() -= 1.0;
  return grad;
}

void check_square_match(const Matrix& omega, Index p) {
  if (omega.rows() != p || omega.cols() != p) {
    throw InvalidInput("omega must be p x p");
  }
}

}  // namespace

FitResult fit(const ThinSVD& svd, const PenaltySpec& penalty,
              const AdmmConfig& cfg, AdmmState* state) {
  cfg.validate();
  const Index p = svd.p();
  penalty.validate(p);

  const RidgeSpectrum spec = build_spectrum(svd, cfg.rho);
  const Matrix theta = threshold_matrix(penalty, p, cfg.rho);
  const double rho = cfg.rho;

  AdmmState local;
  AdmmState& st = state ? *state : local;
  const bool warm = st.a.rows() == p && st.a.cols() == p &&
                    st.b.rows() == p && st.b.cols() == p;
  if (!warm) {
    st.a = Matrix::Identity(p, p);
    st.b = Matrix::Identity(p, p);
    st.k = 0;
  }

  Matrix c(p, p);
  Matrix omega;
  Matrix a_prev;
  bool converged = false;
  int iterations = 0;
  double primal = 0.0;
  double dual = 0.0;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    c.noalias() = rho * (st.a - st.b);
    c.diagonal().array() += 1.0;

    if (cfg.loss == Loss::L1) {
      omega = solve_l1(spec, svd, c);
    } else {
      omega = detail::solve_l2_symmetric(spec, svd, c);
      // The exact iterate is symmetric; strip the rounding skew so the
      // output is exactly symmetric.
      Matrix sym = 0.5 * (omega + omega.transpose());
      omega = std::move(sym);
    }
    if (!omega.allFinite() ||
        omega.cwiseAbs().maxCoeff() > kDivergenceBound) {
      throw NumericalError("ADMM iterate diverged (non-finite or > 1e8); "
                           "consider rescaling the data or increasing rho");
    }

    a_prev.swap(st.a);
    c = omega + st.b;
    st.a = (c.array().sign() * (c.array().abs() - theta.array()).max(0.0))
               .matrix();
    st.b += omega - st.a;

    primal = (omega - st.a).norm();
    dual = rho * (st.a - a_prev).norm();
    const double eps_pri =
        cfg.tol_abs * static_cast<double>(p) +
        cfg.tol_rel * std::max(omega.norm(), st.a.norm());
    const double eps_dual = cfg.tol_abs * static_cast<double>(p) +
                            cfg.tol_rel * rho * st.b.norm();
    ++st.k;
    iterations = it;
    if (primal <= eps_pri && dual <= eps_dual) {
      converged = true;
      break;
    }
  }

  st.omega = std::move(omega);
  st.primal_res = primal;
  st.dual_res = dual;

  FitResult result;
  result.iterations = iterations;
  result.converged = converged;
  result.objective = objective(st.a, svd, penalty, cfg.loss);
  result.kkt_residual = kkt_residual(st.a, svd, penalty, cfg.loss);
  result.estimate =
      cfg.loss == Loss::L1 ? min_abs_symmetrize(st.a) : st.a;
  return result;
}

double objective(const Matrix& omega, const ThinSVD& svd,
                 const PenaltySpec& penalty, Loss loss) {
  check_square_match(omega, svd.p());
  return loss_value(omega, svd, loss) + penalty_value(omega, penalty);
}

double objective(const Matrix& omega, const Matrix& s,
                 const PenaltySpec& penalty, Loss loss) {
  check_square_match(omega, s.rows());
  return loss_value(omega, s, loss) + penalty_value(omega, penalty);
}

double kkt_residual(const Matrix& omega, const ThinSVD& svd,
                    const PenaltySpec& penalty, Loss loss) {
  check_square_match(omega, svd.p());
  return kkt_from_gradient(omega, loss_gradient(omega, svd, loss), penalty);
}

double kkt_residual(const Matrix& omega, const Matrix& s,
                    const PenaltySpec& penalty, Loss loss) {
  check_square_match(omega, s.rows());
  return kkt_from_gradient(omega, loss_gradient(omega, s, loss), penalty);
}

Vector lambda_grid(const Matrix& s, Index n_samples, int count) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw InvalidInput("lambda_grid: S must be square");
  }
  if (count < 2) throw InvalidInput("lambda_grid: count must be >= 2");
  if (n_samples < 1) throw InvalidInput("lambda_grid: n must be >= 1");

  const double lambda_max = s.cwiseAbs().maxCoeff();
  if (lambda_max == 0.0) throw InvalidInput("lambda_grid: S is all zero");

  const double factor = std::sqrt(
      std::log(static_cast<double>(s.rows())) / static_cast<double>(n_samples));
  if (!(factor < 1.0)) {
    throw InvalidInput("lambda_grid: sqrt(log(p)/n) >= 1, grid endpoints "
                       "would swap; n is too small for this p");
  }
  if (!(factor > 0.0)) {
    throw InvalidInput("lambda_grid: sqrt(log(p)/n) must be positive (p >= 2)");
  }

  Vector grid(count);
  const double log_factor = std::log(factor);
  for (int i = 0; i < count; ++i) {
    grid(i) = lambda_max *
              std::exp(log_factor * static_cast<double>(i) /
                       static_cast<double>(count - 1));
  }
  grid(0) = lambda_max;
  grid(count - 1) = lambda_max * factor;
  return grid;
}

double sparsity_per_row(const Matrix& estimate, double tol) {
  const Index p = estimate.rows();
  Index nonzeros = 0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      if (i != j && std::abs(estimate(i, j)) > tol) ++nonzeros;
    }
  }
  return static_cast<double>(nonzeros) / static_cast<double>(p);
}

void walk_path(const ThinSVD& svd, const Vector& grid,
               const PenaltySpec& penalty_template, const AdmmConfig& cfg,
               const std::function<void(Index, const FitResult&)>& visit) {
  if (grid.size() < 1) throw InvalidInput("walk_path: empty grid");
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid(i) > grid(i + 1))) {
      throw InvalidInput("walk_path: grid must be strictly descending");
    }
  }
  AdmmState state;
  PenaltySpec penalty = penalty_template;
  for (Index i = 0; i < grid.size(); ++i) {
    penalty.lambda = grid(i);
    const FitResult result = fit(svd, penalty, cfg, &state);
    visit(i, result);
  }
}

SolutionPath solution_path(const ThinSVD& svd, const Vector& grid,
                           const PenaltySpec& penalty_template,
                           const AdmmConfig& cfg) {
  SolutionPath path;
  path.lambdas = grid;
  path.fits.resize(static_cast<std::size_t>(grid.size()));
  path.sparsity.resize(grid.size());
  walk_path(svd, grid, penalty_template, cfg,
            [&](Index i, const FitResult& result) {
              path.sparsity(i) = sparsity_per_row(result.estimate);
              path.fits[static_cast<std::size_t>(i)] = result;
            });
  return path;
}

}  // namespace equal
