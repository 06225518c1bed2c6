#pragma once

#include "equal/matrix_core.hpp"

namespace equal {

// Precomputed spectral weights for step size rho:
//   lam1_i  = tau_i / (tau_i + rho)
//   lam2_i  = tau_i / (tau_i + 2 rho)
//   lam3_ij = tau_i tau_j (tau_i + tau_j + 4 rho) /
//             ((tau_i + 2 rho)(tau_j + 2 rho)(tau_i + tau_j + 2 rho))
struct RidgeSpectrum {
  double rho = 0.0;
  Vector lam1;
  Vector lam2;
  Matrix lam3;  // m x m, symmetric

  Index m() const { return lam1.size(); }
};

RidgeSpectrum build_spectrum(const ThinSVD& svd, double rho);

// (S + rho I)^{-1} = rho^{-1} I - rho^{-1} U diag(lam1) U^T, formed densely.
// Diagnostic; the solve paths never materialize it.
Matrix ridge_inverse_l1(const ThinSVD& svd, double rho);

// The p^2 x p^2 inverse of (S/2 (x) I + I (x) S/2 + rho I), assembled from
// the four-term low-rank expression. Test-oracle support; guarded to p <= 12.
Matrix ridge_inverse_l2_kron(const ThinSVD& svd, double rho);

// Unique solution of S W + rho W = C, as rho^{-1} C - rho^{-1} U lam1 U^T C.
// Cost O(m p^2); no p x p inverse is formed. Output need not be symmetric
// even for symmetric C.
Matrix solve_l1(const RidgeSpectrum& spec, const ThinSVD& svd, const Matrix& c);

// Unique solution of S W / 2 + W S / 2 + rho W = C:
//   rho^{-1} (C - C U lam2 U^T - U lam2 U^T C + U (lam3 o U^T C U) U^T).
// Cost O(m p^2 + m^2 p); preserves symmetry of C up to rounding.
Matrix solve_l2(const RidgeSpectrum& spec, const ThinSVD& svd, const Matrix& c);

namespace detail {
// solve_l2 specialization for symmetric C; one transpose-pair GEMM saved.
Matrix solve_l2_symmetric(const RidgeSpectrum& spec, const ThinSVD& svd,
                          const Matrix& c);
}  // namespace detail

}  // namespace equal
