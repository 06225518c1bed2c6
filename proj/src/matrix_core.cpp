#include "equal/matrix_core.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace equal {

namespace {

void check_finite(const Matrix& values, const char* what) {
  if (!values.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entries");
  }
}

void check_data(const DataMatrix& x) {
  if (x.n() < 1 || x.p() < 1) {
    throw InvalidInput("data matrix must have at least one row and column");
  }
  check_finite(x.values, "data matrix");
}

Matrix centered_values(const DataMatrix& x) {
  if (x.n() < 2) {
    throw InvalidInput("centering needs at least two observations");
  }
  return x.values.rowwise() - x.values.colwise().mean();
}

}  // namespace

DataMatrix make_data_matrix(Matrix values) {
  DataMatrix x{std::move(values)};
  check_data(x);
  return x;
}

Matrix sample_covariance(const DataMatrix& x, bool center) {
  check_data(x);
  const double inv_n = 1.0 / static_cast<double>(x.n());
  if (!center) {
    return inv_n * (x.values.transpose() * x.values);
  }
  const Matrix c = centered_values(x);
  return inv_n * (c.transpose() * c);
}

ThinSVD thin_svd_gram(const DataMatrix& x, bool center) {
  check_data(x);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.n()));
  const Matrix y = scale * (center ? centered_values(x) : x.values);

  Eigen::BDCSVD<Matrix> svd(y, Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("thin SVD did not converge");
  }

  ThinSVD out;
  out.u = svd.matrixV();
  out.taus = svd.singularValues().array().square();
  // Clamp noise-level eigenvalues so the spectral ratios are exactly zero.
  const double floor = 1e-12 * out.taus.maxCoeff();
  for (Index i = 0; i < out.taus.size(); ++i) {
    if (out.taus(i) < floor) out.taus(i) = 0.0;
  }
  return out;
}

Matrix soft_threshold(const Matrix& m, const Matrix& thresholds) {
  if (m.rows() != thresholds.rows() || m.cols() != thresholds.cols()) {
    throw InvalidInput("soft_threshold: shape mismatch");
  }
  if ((thresholds.array() < 0.0).any()) {
    throw InvalidInput("soft_threshold: negative threshold entry");
  }
  return m.array().sign() * (m.array().abs() - thresholds.array()).max(0.0);
}

Matrix min_abs_symmetrize(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("min_abs_symmetrize: matrix must be square");
  }
  Matrix out = a;
  const Index p = a.rows();
  for (Index j = 1; j < p; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double upper = a(i, j);
      const double lower = a(j, i);
      const double kept = std::abs(upper) < std::abs(lower) ? upper : lower;
      out(i, j) = kept;
      out(j, i) = kept;
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace equal
