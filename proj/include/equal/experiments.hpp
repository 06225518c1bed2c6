#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "equal/admm.hpp"
#include "equal/glasso.hpp"
#include "equal/matrix_core.hpp"

namespace equal {

enum class CaseKind { Case1, Case2, Case3 };

// Equal: L1 loss with min-abs output symmetrization. Equals: symmetric L2
// loss. Glasso: the ADMM baseline.
enum class Method { Equal, Equals, Glasso };

struct PrecisionModel {
  CaseKind kind;
  Index p = 0;
  Matrix omega;  // true precision, symmetric positive definite
  Matrix sigma;  // its inverse
};

// omega_ij = 0.5^|i-j|; sigma is the exact tridiagonal inverse.
PrecisionModel gen_case1(Index p);

// The tridiagonal (1/3) * tridiag(-2; 4, 5, ..., 5, 4; -2); sigma is the
// 0.5^|i-j| matrix.
PrecisionModel gen_case2(Index p);

// Block diagonal of p/5 copies of the 5x5 equicorrelation block (diag 1,
// off-diag 0.5), each scaled by a weight drawn uniform on [0.5, 5] and
// rescaled to mean 1. Consumes exactly p/5 uniforms from the seeded stream,
// in block order. p must be divisible by 5.
PrecisionModel gen_case3(Index p, std::uint64_t seed);

PrecisionModel gen_case(CaseKind kind, Index p, std::uint64_t seed);

// n rows drawn from N(0, sigma) through the Cholesky factor of sigma,
// filled observation by observation; bitwise deterministic per seed.
DataMatrix sample_gaussian(const PrecisionModel& model, Index n,
                           std::uint64_t seed);

// loss1: Frobenius error / sqrt(p). loss2: spectral error. loss3: normalized
// Stein loss sqrt((tr(sigma W) - logdet(sigma W) - p)/p), defined only when
// the estimate is PD. loss4: sqrt((tr(W^T sigma W)/2 - tr(W) + tr(omega)/2)/p).
struct LossReport {
  double loss1 = 0.0;
  double loss2 = 0.0;
  std::optional<double> loss3;
  double loss4 = 0.0;
  double min_eigen = 0.0;
};

LossReport losses(const PrecisionModel& truth, const Matrix& estimate);

double min_eigenvalue_sym(const Matrix& m);

struct CvResult {
  double best_lambda = 0.0;
  Vector cv_curve;  // mean held-out score per grid value
  int fold_count = 0;
};

// k-fold CV: rows are shuffled (seeded) and cut into contiguous folds; each
// fold is scored on its held-out covariance with the method's own loss
// (L1/L2 for the quadratic methods, negative log-likelihood for glasso).
// best_lambda minimizes the mean curve, ties resolved toward larger lambda.
// Centering requires every fold to keep >= 2 rows.
CvResult cross_validate(const DataMatrix& x, const Vector& grid, int folds,
                        Method method, const AdmmConfig& cfg,
                        std::uint64_t seed, bool center = false);

// Fits `method` at a single lambda on the given data (full refit after CV).
FitResult fit_method(const DataMatrix& x, Method method, double lambda,
                     const AdmmConfig& cfg, bool center = false);

struct SimRow {
  CaseKind kind;
  Index p = 0;
  Index n = 0;
  int rep = 0;
  Method method;
  PenaltyFamily family = PenaltyFamily::Lasso;
  double lambda = 0.0;
  LossReport report;
};

// Per replication: draw a model + sample, select lambda by k-fold CV on the
// base (lasso) path, refit on the full sample, and report losses. Nonconvex
// families add a one-step LLA refit row at the same lambda (quadratic-loss
// methods only). Deterministic per seed; replications run concurrently.
std::vector<SimRow> run_simulation(CaseKind kind, Index p, Index n, int reps,
                                   const std::vector<Method>& methods,
                                   const std::vector<PenaltyFamily>& families,
                                   int grid_size, int folds,
                                   const AdmmConfig& cfg, std::uint64_t seed);

struct TimingRow {
  CaseKind kind;
  Index p = 0;
  Index n = 0;
  Method method;
  int grid_size = 0;
  int reps = 0;
  double mean_seconds = 0.0;
  double sd_seconds = 0.0;
};

// Wall-clock seconds for one full solution path (covariance factorization
// included), mean and sd over reps. One warm-up path per method runs first
// and is discarded. Cells run serially.
std::vector<TimingRow> bench_timing(const std::vector<CaseKind>& cases,
                                    const std::vector<Index>& p_list, Index n,
                                    int grid_size,
                                    const std::vector<Method>& methods,
                                    int reps, const AdmmConfig& cfg,
                                    std::uint64_t seed);

}  // namespace equal
