#pragma once

#include <Eigen/Dense>

#include "equal/errors.hpp"

namespace equal {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// n x p data matrix, rows are observations.
struct DataMatrix {
  Matrix values;

  Index n() const { return values.rows(); }
  Index p() const { return values.cols(); }
};

// Validates shape (n, p >= 1) and finiteness.
DataMatrix make_data_matrix(Matrix values);

// (1/n) X^T X, or (1/n)(X - Xbar)^T (X - Xbar) when center is set.
// Centering needs n >= 2. The 1/n scaling matches the mean-zero model.
Matrix sample_covariance(const DataMatrix& x, bool center = false);

// Low-rank spectral factorization S = U diag(taus) U^T of the sample
// covariance, with m = min(n, p) columns.
struct ThinSVD {
  Matrix u;     // p x m, orthonormal columns
  Vector taus;  // m eigenvalues of S, descending, >= 0

  Index p() const { return u.rows(); }
  Index m() const { return u.cols(); }
};

// Factors the sample covariance through an SVD of the scaled data matrix
// X/sqrt(n), squaring the singular values; cost O(min(n,p) * n * p). The
// p x p covariance is never formed. Singular values below 1e-12 * max are
// clamped to exactly zero.
ThinSVD thin_svd_gram(const DataMatrix& x, bool center = false);

// Entrywise sign(m) * max(|m| - t, 0). Thresholds must be >= 0.
Matrix soft_threshold(const Matrix& m, const Matrix& thresholds);

// Returns the symmetric matrix keeping, for each off-diagonal pair, the
// entry of smaller absolute value; ties take the lower-triangle entry.
// Diagonal unchanged.
Matrix min_abs_symmetrize(const Matrix& a);

// Kronecker product; test-oracle support, keep the dimensions small.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace equal
