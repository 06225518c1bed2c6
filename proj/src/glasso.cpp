#include "equal/glasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace equal {

namespace {

constexpr double kDivergenceBound = 1e8;

void check_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidInput(std::string(what) + ": matrix must be square");
  }
}

// Returns log|W| through Cholesky, or nullopt when W is not PD.
std::optional<double> log_det_pd(const Matrix& w) {
  Eigen::LLT<Matrix> llt(w);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Matrix l = llt.matrixL();
  return 2.0 * l.diagonal().array().log().sum();
}

}  // namespace

EigDecomp eig_sym(const Matrix& m) {
  check_square(m, "eig_sym");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition failed");
  }
  return {es.eigenvectors(), es.eigenvalues()};
}

Matrix glasso_omega_update(const Matrix& m, double rho) {
  check_square(m, "glasso_omega_update");
  if (!(rho > 0.0)) {
    throw InvalidInput("glasso_omega_update: rho must be positive");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
    throw InvalidInput("glasso_omega_update: M must be symmetric");
  }
  const EigDecomp ed = eig_sym(m);
  const Vector mapped =
      (ed.a.array() + (ed.a.array().square() + 4.0 * rho).sqrt()) /
      (2.0 * rho);
  const Matrix out = ed.q * mapped.asDiagonal() * ed.q.transpose();
  return 0.5 * (out + out.transpose());
}

double glasso_objective(const Matrix& s, const Matrix& omega, double lambda) {
  check_square(s, "glasso_objective");
  const auto logdet = log_det_pd(omega);
  if (!logdet) return std::numeric_limits<double>::infinity();
  return s.cwiseProduct(omega).sum() - *logdet +
         lambda * omega.cwiseAbs().sum();
}

double glasso_kkt_residual(const Matrix& s, const Matrix& omega,
                           double lambda) {
  check_square(s, "glasso_kkt_residual");
  Eigen::LLT<Matrix> llt(omega);
  if (llt.info() != Eigen::Success) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const Matrix grad =
      s - llt.solve(Matrix::Identity(omega.rows(), omega.cols()));
  double worst = 0.0;
  for (Index j = 0; j < omega.cols(); ++j) {
    for (Index i = 0; i < omega.rows(); ++i) {
      const double g = grad(i, j);
      const double o = omega(i, j);
      const double viol = o != 0.0
                              ? std::abs(g + (o > 0.0 ? lambda : -lambda))
                              : std::max(std::abs(g) - lambda, 0.0);
      worst = std::max(worst, viol);
    }
  }
  return worst;
}

FitResult glasso_fit(const Matrix& s, double lambda, const AdmmConfig& cfg,
                     AdmmState* state) {
  cfg.validate();
  check_square(s, "glasso_fit");
  if (!(lambda >= 0.0)) throw InvalidInput("glasso_fit: lambda must be >= 0");

  const Index p = s.rows();
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

  const double threshold = lambda / rho;
  Matrix m(p, p);
  Matrix omega;
  Matrix a_prev;
  bool converged = false;
  int iterations = 0;
  double primal = 0.0;
  double dual = 0.0;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    m = rho * (st.a - st.b) - s;
    omega = glasso_omega_update(m, rho);
    if (!omega.allFinite() ||
        omega.cwiseAbs().maxCoeff() > kDivergenceBound) {
      throw NumericalError("glasso ADMM iterate diverged");
    }

    a_prev.swap(st.a);
    m = omega + st.b;
    st.a = (m.array().sign() * (m.array().abs() - threshold).max(0.0))
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
  result.estimate = st.a;
  result.iterations = iterations;
  result.converged = converged;
  result.objective = glasso_objective(s, st.a, lambda);
  result.kkt_residual = glasso_kkt_residual(s, st.a, lambda);
  return result;
}

void walk_glasso_path(
    const Matrix& s, const Vector& grid, const AdmmConfig& cfg,
    const std::function<void(Index, const FitResult&)>& visit) {
  if (grid.size() < 1) throw InvalidInput("walk_glasso_path: empty grid");
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid(i) > grid(i + 1))) {
      throw InvalidInput("walk_glasso_path: grid must be strictly descending");
    }
  }
  AdmmState state;
  for (Index i = 0; i < grid.size(); ++i) {
    const FitResult result = glasso_fit(s, grid(i), cfg, &state);
    visit(i, result);
  }
}

}  // namespace equal
