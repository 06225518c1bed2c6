#include "equal/ridge_solvers.hpp"

namespace equal {

RidgeSpectrum build_spectrum(const ThinSVD& svd, double rho) {
  if (!(rho > 0.0)) {
    throw InvalidInput("build_spectrum: rho must be positive");
  }
  const Index m = svd.m();
  const Vector& taus = svd.taus;

  RidgeSpectrum spec;
  spec.rho = rho;
  spec.lam1 = taus.array() / (taus.array() + rho);
  spec.lam2 = taus.array() / (taus.array() + 2.0 * rho);
  spec.lam3.resize(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      const double ti = taus(i);
      const double tj = taus(j);
      spec.lam3(i, j) = ti * tj * (ti + tj + 4.0 * rho) /
                        ((ti + 2.0 * rho) * (tj + 2.0 * rho) *
                         (ti + tj + 2.0 * rho));
    }
  }
  return spec;
}

Matrix ridge_inverse_l1(const ThinSVD& svd, double rho) {
  const RidgeSpectrum spec = build_spectrum(svd, rho);
  const double inv_rho = 1.0 / rho;
  Matrix out = -inv_rho * (svd.u * spec.lam1.asDiagonal() * svd.u.transpose());
  out.diagonal().array() += inv_rho;
  return out;
}

Matrix ridge_inverse_l2_kron(const ThinSVD& svd, double rho) {
  const Index p = svd.p();
  if (p > 12) {
    throw InvalidInput("ridge_inverse_l2_kron: p too large for the p^2 x p^2 "
                       "assembly (max 12)");
  }
  const RidgeSpectrum spec = build_spectrum(svd, rho);
  const double inv_rho = 1.0 / rho;
  const Matrix eye = Matrix::Identity(p, p);
  const Matrix u_lam2_ut = svd.u * spec.lam2.asDiagonal() * svd.u.transpose();
  const Matrix uu = kron(svd.u, svd.u);

  // vec stacks columns, so diag{vec(lam3)} pairs entry (i,j) with column
  // j*m + i of U (x) U.
  const Index m = svd.m();
  Vector lam3_vec(m * m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < m; ++i) {
      lam3_vec(j * m + i) = spec.lam3(i, j);
    }
  }

  Matrix out = Matrix::Identity(p * p, p * p) * inv_rho;
  out -= inv_rho * kron(u_lam2_ut, eye);
  out -= inv_rho * kron(eye, u_lam2_ut);
  out += inv_rho * (uu * lam3_vec.asDiagonal() * uu.transpose());
  return out;
}

namespace {

void check_solve_shapes(const RidgeSpectrum& spec, const ThinSVD& svd,
                        const Matrix& c) {
  if (c.rows() != svd.p() || c.cols() != svd.p()) {
    throw InvalidInput("ridge solve: C must be p x p");
  }
  if (spec.m() != svd.m()) {
    throw InvalidInput("ridge solve: spectrum and SVD rank mismatch");
  }
}

}  // namespace

Matrix solve_l1(const RidgeSpectrum& spec, const ThinSVD& svd,
                const Matrix& c) {
  check_solve_shapes(spec, svd, c);
  const double inv_rho = 1.0 / spec.rho;
  const Matrix ut_c = svd.u.transpose() * c;
  return inv_rho * (c - svd.u * (spec.lam1.asDiagonal() * ut_c));
}

Matrix solve_l2(const RidgeSpectrum& spec, const ThinSVD& svd,
                const Matrix& c) {
  check_solve_shapes(spec, svd, c);
  const double inv_rho = 1.0 / spec.rho;
  const Matrix ut_c = svd.u.transpose() * c;                      // m x p
  const Matrix left = svd.u * (spec.lam2.asDiagonal() * ut_c);    // U L2 U^T C
  const Matrix c_u = c * svd.u;                                   // p x m
  const Matrix right = (c_u * spec.lam2.asDiagonal()) * svd.u.transpose();
  const Matrix had = spec.lam3.cwiseProduct(ut_c * svd.u);        // m x m
  return inv_rho * (c - left - right + svd.u * had * svd.u.transpose());
}

namespace detail {

Matrix solve_l2_symmetric(const RidgeSpectrum& spec, const ThinSVD& svd,
                          const Matrix& c) {
  check_solve_shapes(spec, svd, c);
  const double inv_rho = 1.0 / spec.rho;
  const Matrix ut_c = svd.u.transpose() * c;
  const Matrix left = svd.u * (spec.lam2.asDiagonal() * ut_c);
  const Matrix had = spec.lam3.cwiseProduct(ut_c * svd.u);
  Matrix out = c - left - left.transpose() + svd.u * had * svd.u.transpose();
  out *= inv_rho;
  return out;
}

}  // namespace detail

}  // namespace equal
