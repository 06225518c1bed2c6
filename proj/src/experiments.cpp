#include "equal/experiments.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <limits>

#include "equal/rng.hpp"

namespace equal {

namespace {

Loss method_loss(Method method) {
  return method == Method::Equal ? Loss::L1 : Loss::L2;
}

Matrix case1_matrix(Index p) {
  Matrix m(p, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      m(i, j) = std::pow(0.5, static_cast<double>(std::abs(i - j)));
    }
  }
  return m;
}

Matrix case2_matrix(Index p) {
  Matrix m = Matrix::Zero(p, p);
  for (Index i = 0; i < p; ++i) m(i, i) = 5.0 / 3.0;
  m(0, 0) = 4.0 / 3.0;
  m(p - 1, p - 1) = 4.0 / 3.0;
  for (Index i = 0; i + 1 < p; ++i) {
    m(i, i + 1) = -2.0 / 3.0;
    m(i + 1, i) = -2.0 / 3.0;
  }
  return m;
}

}  // namespace

PrecisionModel gen_case1(Index p) {
  if (p < 1) throw InvalidInput("gen_case1: p must be >= 1");
  PrecisionModel model;
  model.kind = CaseKind::Case1;
  model.p = p;
  model.omega = case1_matrix(p);
  model.sigma = p == 1 ? Matrix::Identity(1, 1) : case2_matrix(p);
  return model;
}

PrecisionModel gen_case2(Index p) {
  if (p < 2) throw InvalidInput("gen_case2: p must be >= 2");
  PrecisionModel model;
  model.kind = CaseKind::Case2;
  model.p = p;
  model.omega = case2_matrix(p);
  model.sigma = case1_matrix(p);
  return model;
}

PrecisionModel gen_case3(Index p, std::uint64_t seed) {
  if (p < 5 || p % 5 != 0) {
    throw InvalidInput("gen_case3: p must be a positive multiple of 5");
  }
  const Index blocks = p / 5;
  Rng rng(seed);
  Vector w(blocks);
  for (Index b = 0; b < blocks; ++b) w(b) = rng.uniform(0.5, 5.0);
  w /= w.mean();

  // 5x5 equicorrelation block and its closed-form inverse 2 I - J/3.
  Matrix block = Matrix::Constant(5, 5, 0.5);
  block.diagonal().setOnes();
  Matrix block_inv = Matrix::Constant(5, 5, -1.0 / 3.0);
  block_inv.diagonal().setConstant(5.0 / 3.0);

  PrecisionModel model;
  model.kind = CaseKind::Case3;
  model.p = p;
  model.omega = Matrix::Zero(p, p);
  model.sigma = Matrix::Zero(p, p);
  for (Index b = 0; b < blocks; ++b) {
    model.omega.block(5 * b, 5 * b, 5, 5) = w(b) * block;
    model.sigma.block(5 * b, 5 * b, 5, 5) = block_inv / w(b);
  }
  return model;
}

PrecisionModel gen_case(CaseKind kind, Index p, std::uint64_t seed) {
  switch (kind) {
    case CaseKind::Case1:
      return gen_case1(p);
    case CaseKind::Case2:
      return gen_case2(p);
    case CaseKind::Case3:
      return gen_case3(p, seed);
  }
  throw InvalidInput("unknown case kind");
}

DataMatrix sample_gaussian(const PrecisionModel& model, Index n,
                           std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample_gaussian: n must be >= 1");
  Eigen::LLT<Matrix> llt(model.sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("sample_gaussian: covariance factorization failed");
  }
  Rng rng(seed);
  Matrix z(n, model.p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < model.p; ++j) z(i, j) = rng.normal();
  }
  const Matrix lt = llt.matrixL().transpose();
  return DataMatrix{z * lt};
}

double min_eigenvalue_sym(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidInput("min_eigenvalue_sym: matrix must be square");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("min_eigenvalue_sym: eigendecomposition failed");
  }
  return es.eigenvalues().minCoeff();
}

LossReport losses(const PrecisionModel& truth, const Matrix& estimate) {
  const Index p = truth.p;
  if (estimate.rows() != p || estimate.cols() != p) {
    throw InvalidInput("losses: estimate must match the model dimension");
  }
  const double dp = static_cast<double>(p);
  const Matrix diff = truth.omega - estimate;

  LossReport report;
  report.loss1 = diff.norm() / std::sqrt(dp);
  {
    Eigen::BDCSVD<Matrix> svd(diff);
    report.loss2 = svd.singularValues()(0);
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(estimate, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("losses: eigendecomposition failed");
  }
  report.min_eigen = es.eigenvalues().minCoeff();

  if (report.min_eigen > 0.0) {
    // logdet(sigma * W) = logdet(W) - logdet(omega)
    const double logdet_est = es.eigenvalues().array().log().sum();
    Eigen::LLT<Matrix> llt(truth.omega);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("losses: model precision is not PD");
    }
    const Matrix l = llt.matrixL();
    const double logdet_omega = 2.0 * l.diagonal().array().log().sum();
    const double stein = truth.sigma.cwiseProduct(estimate).sum() -
                         (logdet_est - logdet_omega) - dp;
    report.loss3 = std::sqrt(std::max(stein, 0.0) / dp);
  }

  const Matrix sigma_est = truth.sigma * estimate;
  const double quad = 0.5 * estimate.cwiseProduct(sigma_est).sum() -
                      estimate.trace() + 0.5 * truth.omega.trace();
  report.loss4 = std::sqrt(std::max(quad, 0.0) / dp);
  return report;
}

namespace {

void check_grid(const Vector& grid) {
  if (grid.size() < 1) throw InvalidInput("grid must be nonempty");
  for (Index i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid(i) > grid(i + 1))) {
      throw InvalidInput("grid must be strictly descending");
    }
  }
}

Matrix take_rows(const Matrix& values, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), values.cols());
  for (Index i = 0; i < out.rows(); ++i) {
    out.row(i) = values.row(rows[static_cast<std::size_t>(i)]);
  }
  return out;
}

// Held-out score of an estimate under the method's own loss. Quadratic
// methods use the loss evaluated through the held-out rows directly;
// glasso uses the held-out negative log-likelihood.
double holdout_score(Method method, const Matrix& estimate,
                     const Matrix& hold_rows, const Matrix* s_hold) {
  if (method == Method::Glasso) {
    Eigen::LLT<Matrix> llt(estimate);
    if (llt.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }
    const Matrix l = llt.matrixL();
    const double logdet = 2.0 * l.diagonal().array().log().sum();
    return s_hold->cwiseProduct(estimate).sum() - logdet;
  }
  const double inv_n = 1.0 / static_cast<double>(hold_rows.rows());
  const double quad = inv_n * (hold_rows * estimate).squaredNorm();
  if (method == Method::Equal) {
    return 0.5 * quad - estimate.trace();
  }
  const double quad_t = inv_n * (hold_rows * estimate.transpose()).squaredNorm();
  return 0.25 * (quad + quad_t) - estimate.trace();
}

}  // namespace

CvResult cross_validate(const DataMatrix& x, const Vector& grid, int folds,
                        Method method, const AdmmConfig& cfg,
                        std::uint64_t seed, bool center) {
  const Index n = x.n();
  if (folds < 2) throw InvalidInput("cross_validate: folds must be >= 2");
  if (n < folds) {
    throw InvalidInput("cross_validate: more folds than observations");
  }
  check_grid(grid);

  Rng rng(seed);
  const std::vector<Index> perm = rng.permutation(n);
  std::vector<Index> starts(static_cast<std::size_t>(folds) + 1);
  for (int f = 0; f <= folds; ++f) {
    starts[static_cast<std::size_t>(f)] =
        static_cast<Index>(f) * n / static_cast<Index>(folds);
  }
  if (center) {
    for (int f = 0; f < folds; ++f) {
      const Index size = starts[f + 1] - starts[f];
      if (size < 2 || n - size < 2) {
        throw InvalidInput("cross_validate: centering needs every fold and "
                           "its complement to keep at least 2 rows");
      }
    }
  }

  Matrix scores(folds, grid.size());

#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> hold_idx(perm.begin() + starts[f],
                                perm.begin() + starts[f + 1]);
    std::vector<Index> train_idx;
    train_idx.reserve(static_cast<std::size_t>(n) - hold_idx.size());
    train_idx.insert(train_idx.end(), perm.begin(), perm.begin() + starts[f]);
    train_idx.insert(train_idx.end(), perm.begin() + starts[f + 1],
                     perm.end());

    const DataMatrix train{take_rows(x.values, train_idx)};
    Matrix hold_rows = take_rows(x.values, hold_idx);
    if (center) hold_rows.rowwise() -= hold_rows.colwise().mean().eval();

    AdmmConfig fold_cfg = cfg;
    if (method == Method::Glasso) {
      const Matrix s_train = sample_covariance(train, center);
      const double inv_nh = 1.0 / static_cast<double>(hold_rows.rows());
      const Matrix s_hold = inv_nh * (hold_rows.transpose() * hold_rows);
      walk_glasso_path(s_train, grid, fold_cfg,
                       [&](Index i, const FitResult& r) {
                         scores(f, i) = holdout_score(method, r.estimate,
                                                      hold_rows, &s_hold);
                       });
    } else {
      fold_cfg.loss = method_loss(method);
      const ThinSVD svd = thin_svd_gram(train, center);
      walk_path(svd, grid, PenaltySpec::lasso(0.0), fold_cfg,
                [&](Index i, const FitResult& r) {
                  scores(f, i) = holdout_score(method, r.estimate, hold_rows,
                                               nullptr);
                });
    }
  }

  CvResult result;
  result.fold_count = folds;
  result.cv_curve = scores.colwise().mean();
  Index best = 0;
  for (Index i = 1; i < grid.size(); ++i) {
    if (result.cv_curve(i) < result.cv_curve(best)) best = i;
  }
  result.best_lambda = grid(best);
  return result;
}

FitResult fit_method(const DataMatrix& x, Method method, double lambda,
                     const AdmmConfig& cfg, bool center) {
  if (method == Method::Glasso) {
    return glasso_fit(sample_covariance(x, center), lambda, cfg);
  }
  AdmmConfig local = cfg;
  local.loss = method_loss(method);
  return fit(thin_svd_gram(x, center), PenaltySpec::lasso(lambda), local);
}

std::vector<SimRow> run_simulation(CaseKind kind, Index p, Index n, int reps,
                                   const std::vector<Method>& methods,
                                   const std::vector<PenaltyFamily>& families,
                                   int grid_size, int folds,
                                   const AdmmConfig& cfg, std::uint64_t seed) {
  if (reps < 1) throw InvalidInput("run_simulation: reps must be >= 1");
  if (methods.empty()) throw InvalidInput("run_simulation: no methods");
  if (families.empty()) throw InvalidInput("run_simulation: no families");

  // Row layout per replication, fixed so concurrent reps fill fixed slots.
  struct Slot {
    Method method;
    PenaltyFamily family;
  };
  std::vector<Slot> slots;
  for (const Method method : methods) {
    for (const PenaltyFamily family : families) {
      if (method == Method::Glasso && family != PenaltyFamily::Lasso) continue;
      slots.push_back({method, family});
    }
  }
  if (slots.empty()) {
    throw InvalidInput("run_simulation: no method/family combinations");
  }

  std::vector<SimRow> rows(static_cast<std::size_t>(reps) * slots.size());

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) {
    const auto stream = static_cast<std::uint64_t>(rep);
    const PrecisionModel model =
        gen_case(kind, p, derive_seed(seed, 3 * stream));
    const DataMatrix x =
        sample_gaussian(model, n, derive_seed(seed, 3 * stream + 1));
    const std::uint64_t cv_seed = derive_seed(seed, 3 * stream + 2);

    const Matrix s = sample_covariance(x, false);
    const Vector grid = lambda_grid(s, n, grid_size);

    ThinSVD svd;      // shared by the quadratic methods
    bool have_svd = false;

    // Slots are grouped by method, so the CV lambda and base lasso fit of
    // the current method are computed once and reused by its LLA families.
    bool have_base = false;
    Method base_method = Method::Equal;
    double base_lambda = 0.0;
    FitResult base_fit;

    for (std::size_t si = 0; si < slots.size(); ++si) {
      const Slot& slot = slots[si];
      SimRow& row =
          rows[static_cast<std::size_t>(rep) * slots.size() + si];
      row.kind = kind;
      row.p = p;
      row.n = n;
      row.rep = rep;
      row.method = slot.method;
      row.family = slot.family;

      if (slot.method == Method::Glasso) {
        const CvResult cv =
            cross_validate(x, grid, folds, slot.method, cfg, cv_seed);
        const FitResult refit = glasso_fit(s, cv.best_lambda, cfg);
        row.lambda = cv.best_lambda;
        row.report = losses(model, refit.estimate);
        continue;
      }

      if (!have_svd) {
        svd = thin_svd_gram(x, false);
        have_svd = true;
      }
      AdmmConfig local = cfg;
      local.loss = method_loss(slot.method);

      if (!have_base || base_method != slot.method) {
        const CvResult cv =
            cross_validate(x, grid, folds, slot.method, cfg, cv_seed);
        base_lambda = cv.best_lambda;
        base_fit = fit(svd, PenaltySpec::lasso(base_lambda), local);
        base_method = slot.method;
        have_base = true;
      }
      row.lambda = base_lambda;
      if (slot.family == PenaltyFamily::Lasso) {
        row.report = losses(model, base_fit.estimate);
      } else {
        const double tau = slot.family == PenaltyFamily::Scad ? 3.7 : 2.0;
        const FitResult refit =
            lla_refit(svd, base_fit, slot.family, base_lambda, tau, local);
        row.report = losses(model, refit.estimate);
      }
    }
  }
  return rows;
}

std::vector<TimingRow> bench_timing(const std::vector<CaseKind>& cases,
                                    const std::vector<Index>& p_list, Index n,
                                    int grid_size,
                                    const std::vector<Method>& methods,
                                    int reps, const AdmmConfig& cfg,
                                    std::uint64_t seed) {
  if (reps < 1) throw InvalidInput("bench_timing: reps must be >= 1");
  if (cases.empty() || p_list.empty() || methods.empty()) {
    throw InvalidInput("bench_timing: empty case, size, or method list");
  }
  using clock = std::chrono::steady_clock;

  std::vector<TimingRow> rows;
  std::uint64_t stream = 0;
  for (const Method method : methods) {
    bool warmed = false;
    for (const CaseKind kind : cases) {
      for (const Index p : p_list) {
        const PrecisionModel model =
            gen_case(kind, p, derive_seed(seed, 2 * stream));
        const DataMatrix x =
            sample_gaussian(model, n, derive_seed(seed, 2 * stream + 1));
        ++stream;

        const auto run_once = [&]() {
          const auto t0 = clock::now();
          const Matrix s = sample_covariance(x, false);
          const Vector grid = lambda_grid(s, n, grid_size);
          if (method == Method::Glasso) {
            walk_glasso_path(s, grid, cfg, [](Index, const FitResult&) {});
          } else {
            AdmmConfig local = cfg;
            local.loss = method_loss(method);
            const ThinSVD svd = thin_svd_gram(x, false);
            walk_path(svd, grid, PenaltySpec::lasso(0.0), local,
                      [](Index, const FitResult&) {});
          }
          const auto t1 = clock::now();
          return std::chrono::duration<double>(t1 - t0).count();
        };

        if (!warmed) {
          run_once();
          warmed = true;
        }
        Vector times(reps);
        for (int r = 0; r < reps; ++r) times(r) = run_once();

        TimingRow row;
        row.kind = kind;
        row.p = p;
        row.n = n;
        row.method = method;
        row.grid_size = grid_size;
        row.reps = reps;
        row.mean_seconds = times.mean();
        row.sd_seconds =
            reps > 1 ? std::sqrt((times.array() - times.mean()).square().sum() /
                                 static_cast<double>(reps - 1))
                     : 0.0;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace equal
