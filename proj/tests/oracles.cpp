#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>

namespace equal::testing {

Matrix brute_force_covariance(const Matrix& x, bool center) {
  const Index n = x.rows();
  const Index p = x.cols();
  Vector mean = Vector::Zero(p);
  if (center) {
    for (Index j = 0; j < p; ++j) {
      for (Index i = 0; i < n; ++i) mean(j) += x(i, j);
      mean(j) /= static_cast<double>(n);
    }
  }
  Matrix s = Matrix::Zero(p, p);
  for (Index a = 0; a < p; ++a) {
    for (Index b = 0; b < p; ++b) {
      for (Index i = 0; i < n; ++i) {
        s(a, b) += (x(i, a) - mean(a)) * (x(i, b) - mean(b));
      }
      s(a, b) /= static_cast<double>(n);
    }
  }
  return s;
}

Vector vec(const Matrix& m) {
  Vector v(m.size());
  Index k = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
  }
  return v;
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  Matrix m(rows, cols);
  Index k = 0;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = v(k++);
  }
  return m;
}

Matrix kron_system_l1(const Matrix& s, double rho) {
  // vec(S W) = (I (x) S) vec(W); entry ((j,i),(l,k)) = [j==l] S(i,k).
  const Index p = s.rows();
  Matrix h = Matrix::Zero(p * p, p * p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      for (Index k = 0; k < p; ++k) {
        h(j * p + i, j * p + k) += s(i, k);
      }
      h(j * p + i, j * p + i) += rho;
    }
  }
  return h;
}

Matrix kron_system_l2(const Matrix& s, double rho) {
  // vec(S W / 2 + W S / 2): ((j,i),(l,k)) = [j==l] S(i,k)/2 + [i==k] S(j,l)/2.
  const Index p = s.rows();
  Matrix h = Matrix::Zero(p * p, p * p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      const Index row = j * p + i;
      for (Index k = 0; k < p; ++k) h(row, j * p + k) += 0.5 * s(i, k);
      for (Index l = 0; l < p; ++l) h(row, l * p + i) += 0.5 * s(j, l);
      h(row, row) += rho;
    }
  }
  return h;
}

namespace {

Vector weight_vector(const PenaltySpec& penalty, Index p) {
  Vector w(p * p);
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      double wij = penalty.weights ? (*penalty.weights)(i, j) : 1.0;
      if (i == j && !penalty.penalize_diagonal) wij = 0.0;
      w(k++) = wij;
    }
  }
  return w;
}

double vec_objective(const Vector& beta, const Matrix& h, const Vector& b,
                     const Vector& lam_w) {
  return 0.5 * beta.dot(h * beta) - beta.dot(b) +
         lam_w.cwiseProduct(beta.cwiseAbs()).sum();
}

double vec_kkt(const Vector& beta, const Matrix& h, const Vector& b,
               const Vector& lam_w) {
  const Vector grad = h * beta - b;
  double worst = 0.0;
  for (Index k = 0; k < beta.size(); ++k) {
    const double viol =
        beta(k) != 0.0
            ? std::abs(grad(k) + (beta(k) > 0.0 ? lam_w(k) : -lam_w(k)))
            : std::max(std::abs(grad(k)) - lam_w(k), 0.0);
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace

ProxGradResult prox_grad_solve(const Matrix& s, Loss loss,
                               const PenaltySpec& penalty, double tol,
                               int max_iter) {
  const Index p = s.rows();
  const Matrix h = loss == Loss::L1 ? kron_system_l1(s, 0.0)
                                    : kron_system_l2(s, 0.0);
  Vector b = Vector::Zero(p * p);
  for (Index i = 0; i < p; ++i) b(i * p + i) = 1.0;
  const Vector lam_w = penalty.lambda * weight_vector(penalty, p);

  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double lip = std::max(es.eigenvalues().maxCoeff(), 1e-12);

  Vector x = Vector::Zero(p * p);
  Vector y = x;
  double t = 1.0;
  ProxGradResult result;
  for (int it = 1; it <= max_iter; ++it) {
    const Vector grad = h * y - b;
    const Vector z = y - grad / lip;
    Vector x_new(z.size());
    for (Index k = 0; k < z.size(); ++k) {
      const double thresh = lam_w(k) / lip;
      const double a = std::abs(z(k)) - thresh;
      x_new(k) = a > 0.0 ? (z(k) > 0.0 ? a : -a) : 0.0;
    }
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_new + ((t - 1.0) / t_new) * (x_new - x);
    x = std::move(x_new);
    t = t_new;
    result.iterations = it;
    if (it % 25 == 0 && vec_kkt(x, h, b, lam_w) <= tol) break;
  }
  result.kkt = vec_kkt(x, h, b, lam_w);
  result.objective = vec_objective(x, h, b, lam_w);
  result.omega = unvec(x, p, p);
  return result;
}

OracleLosses brute_force_losses(const Matrix& omega_true,
                                const Matrix& estimate) {
  const Index p = omega_true.rows();
  const double dp = static_cast<double>(p);
  const Matrix sigma = omega_true.fullPivLu().inverse();
  const Matrix diff = omega_true - estimate;

  OracleLosses out;
  double fro = 0.0;
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) fro += diff(i, j) * diff(i, j);
  }
  out.loss1 = std::sqrt(fro / dp);

  Eigen::JacobiSVD<Matrix> svd(diff);
  out.loss2 = svd.singularValues()(0);

  // General eigensolver keeps this route independent of the selfadjoint one.
  Eigen::EigenSolver<Matrix> es(estimate);
  out.min_eigen = es.eigenvalues().real().minCoeff();

  if (out.min_eigen > 0.0) {
    const Matrix prod = sigma * estimate;
    double trace = 0.0;
    for (Index i = 0; i < p; ++i) trace += prod(i, i);
    const double logdet = std::log(prod.fullPivLu().determinant());
    out.loss3 = std::sqrt(std::max(trace - logdet - dp, 0.0) / dp);
  }

  const Matrix quad_mat = estimate.transpose() * sigma * estimate;
  double quad = 0.0;
  for (Index i = 0; i < p; ++i) {
    quad += 0.5 * quad_mat(i, i) - estimate(i, i) + 0.5 * omega_true(i, i);
  }
  out.loss4 = std::sqrt(std::max(quad, 0.0) / dp);
  return out;
}

}  // namespace equal::testing
