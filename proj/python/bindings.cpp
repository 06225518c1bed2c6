// Python bindings for the estimation core. Matrices cross the boundary as
// numpy arrays through Eigen.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "equal/admm.hpp"
#include "equal/experiments.hpp"
#include "equal/glasso.hpp"
#include "equal/penalties.hpp"
#include "equal/ridge_solvers.hpp"

namespace py = pybind11;
using namespace equal;

namespace {

PenaltySpec make_penalty(const std::string& family, double lambda, double tau,
                         std::optional<Matrix> weights,
                         bool penalize_diagonal) {
  PenaltySpec spec;
  if (family == "lasso") {
    spec.family = PenaltyFamily::Lasso;
  } else if (family == "scad") {
    spec.family = PenaltyFamily::Scad;
    spec.tau = tau > 0 ? tau : 3.7;
  } else if (family == "mcp") {
    spec.family = PenaltyFamily::Mcp;
    spec.tau = tau > 0 ? tau : 2.0;
  } else {
    throw InvalidInput("unknown penalty family '" + family + "'");
  }
  spec.lambda = lambda;
  if (tau > 0) spec.tau = tau;
  spec.weights = std::move(weights);
  spec.penalize_diagonal = penalize_diagonal;
  return spec;
}

AdmmConfig make_config(const std::string& loss, double rho, int max_iter,
                       double tol_abs, double tol_rel) {
  AdmmConfig cfg;
  if (loss == "l1") {
    cfg.loss = Loss::L1;
  } else if (loss == "l2") {
    cfg.loss = Loss::L2;
  } else {
    throw InvalidInput("loss must be 'l1' or 'l2'");
  }
  cfg.rho = rho;
  cfg.max_iter = max_iter;
  cfg.tol_abs = tol_abs;
  cfg.tol_rel = tol_rel;
  return cfg;
}

Method parse_method(const std::string& name) {
  if (name == "equal") return Method::Equal;
  if (name == "equals") return Method::Equals;
  if (name == "glasso") return Method::Glasso;
  throw InvalidInput("unknown method '" + name + "'");
}

CaseKind parse_case(int id) {
  switch (id) {
    case 1: return CaseKind::Case1;
    case 2: return CaseKind::Case2;
    case 3: return CaseKind::Case3;
  }
  throw InvalidInput("case must be 1, 2, or 3");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse precision-matrix estimation via penalized quadratic "
            "losses (ADMM with closed-form thin-SVD updates)";

  py::class_<ThinSVD>(m, "ThinSVD")
      .def_readonly("u", &ThinSVD::u)
      .def_readonly("taus", &ThinSVD::taus)
      .def_property_readonly("p", &ThinSVD::p)
      .def_property_readonly("m", &ThinSVD::m);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("estimate", &FitResult::estimate)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("objective", &FitResult::objective)
      .def_readonly("kkt_residual", &FitResult::kkt_residual);

  py::class_<SolutionPath>(m, "SolutionPath")
      .def_readonly("lambdas", &SolutionPath::lambdas)
      .def_readonly("fits", &SolutionPath::fits)
      .def_readonly("sparsity", &SolutionPath::sparsity);

  py::class_<CvResult>(m, "CvResult")
      .def_readonly("best_lambda", &CvResult::best_lambda)
      .def_readonly("cv_curve", &CvResult::cv_curve)
      .def_readonly("fold_count", &CvResult::fold_count);

  py::class_<LossReport>(m, "LossReport")
      .def_readonly("loss1", &LossReport::loss1)
      .def_readonly("loss2", &LossReport::loss2)
      .def_property_readonly("loss3",
                             [](const LossReport& r) {
                               return r.loss3 ? py::cast(*r.loss3)
                                              : py::none().cast<py::object>();
                             })
      .def_readonly("loss4", &LossReport::loss4)
      .def_readonly("min_eigen", &LossReport::min_eigen);

  py::class_<PrecisionModel>(m, "PrecisionModel")
      .def_readonly("p", &PrecisionModel::p)
      .def_readonly("omega", &PrecisionModel::omega)
      .def_readonly("sigma", &PrecisionModel::sigma);

  m.def("sample_covariance",
        [](const Matrix& x, bool center) {
          return sample_covariance(make_data_matrix(x), center);
        },
        py::arg("x"), py::arg("center") = false);

  m.def("thin_svd_gram",
        [](const Matrix& x, bool center) {
          return thin_svd_gram(make_data_matrix(x), center);
        },
        py::arg("x"), py::arg("center") = false);

  m.def("soft_threshold", &soft_threshold, py::arg("m"),
        py::arg("thresholds"));
  m.def("min_abs_symmetrize", &min_abs_symmetrize, py::arg("a"));
  m.def("kron", &kron, py::arg("a"), py::arg("b"));

  m.def("ridge_inverse_l1", &ridge_inverse_l1, py::arg("svd"), py::arg("rho"));
  m.def("solve_l1",
        [](const ThinSVD& svd, double rho, const Matrix& c) {
          return solve_l1(build_spectrum(svd, rho), svd, c);
        },
        py::arg("svd"), py::arg("rho"), py::arg("c"));
  m.def("solve_l2",
        [](const ThinSVD& svd, double rho, const Matrix& c) {
          return solve_l2(build_spectrum(svd, rho), svd, c);
        },
        py::arg("svd"), py::arg("rho"), py::arg("c"));

  m.def("fit",
        [](const Matrix& x, double lambda, const std::string& loss,
           const std::string& family, double tau,
           std::optional<Matrix> weights, bool penalize_diagonal, double rho,
           int max_iter, double tol_abs, double tol_rel, bool center) {
          const ThinSVD svd = thin_svd_gram(make_data_matrix(x), center);
          const AdmmConfig cfg =
              make_config(loss, rho, max_iter, tol_abs, tol_rel);
          const PenaltySpec base = make_penalty(
              "lasso", lambda, 0.0, std::move(weights), penalize_diagonal);
          FitResult result = fit(svd, base, cfg);
          if (family == "scad" || family == "mcp") {
            const PenaltySpec target =
                make_penalty(family, lambda, tau, std::nullopt, false);
            result = lla_refit(svd, result, target.family, lambda, target.tau,
                               cfg);
          } else if (family != "lasso") {
            throw InvalidInput("unknown penalty family '" + family + "'");
          }
          return result;
        },
        py::arg("x"), py::arg("lambda_"), py::arg("loss") = "l2",
        py::arg("family") = "lasso", py::arg("tau") = -1.0,
        py::arg("weights") = std::nullopt,
        py::arg("penalize_diagonal") = true, py::arg("rho") = 1.0,
        py::arg("max_iter") = 1000, py::arg("tol_abs") = 1e-6,
        py::arg("tol_rel") = 1e-4, py::arg("center") = false,
        "Fit at a single lambda; 'l1' gives the min-abs-symmetrized "
        "estimator, 'l2' the symmetric-loss one. Nonconvex families run one "
        "LLA step from the lasso solution.");

  m.def("solution_path",
        [](const Matrix& x, int grid_size, const std::string& loss,
           bool penalize_diagonal, double rho, int max_iter, double tol_abs,
           double tol_rel, bool center) {
          const DataMatrix data = make_data_matrix(x);
          const Matrix s = sample_covariance(data, center);
          const Vector grid = lambda_grid(s, data.n(), grid_size);
          const ThinSVD svd = thin_svd_gram(data, center);
          const AdmmConfig cfg =
              make_config(loss, rho, max_iter, tol_abs, tol_rel);
          PenaltySpec base;
          base.penalize_diagonal = penalize_diagonal;
          return solution_path(svd, grid, base, cfg);
        },
        py::arg("x"), py::arg("grid_size") = 50, py::arg("loss") = "l2",
        py::arg("penalize_diagonal") = true, py::arg("rho") = 1.0,
        py::arg("max_iter") = 1000, py::arg("tol_abs") = 1e-6,
        py::arg("tol_rel") = 1e-4, py::arg("center") = false);

  m.def("lambda_grid", &lambda_grid, py::arg("s"), py::arg("n"),
        py::arg("count"));
  m.def("objective",
        [](const Matrix& omega, const Matrix& s, double lambda,
           const std::string& loss, bool penalize_diagonal) {
          return objective(omega, s,
                           PenaltySpec::lasso(lambda, penalize_diagonal),
                           loss == "l1" ? Loss::L1 : Loss::L2);
        },
        py::arg("omega"), py::arg("s"), py::arg("lambda_"),
        py::arg("loss") = "l2", py::arg("penalize_diagonal") = true);
  m.def("kkt_residual",
        [](const Matrix& omega, const Matrix& s, double lambda,
           const std::string& loss, bool penalize_diagonal) {
          return kkt_residual(omega, s,
                              PenaltySpec::lasso(lambda, penalize_diagonal),
                              loss == "l1" ? Loss::L1 : Loss::L2);
        },
        py::arg("omega"), py::arg("s"), py::arg("lambda_"),
        py::arg("loss") = "l2", py::arg("penalize_diagonal") = true);

  m.def("scad_derivative", &scad_derivative, py::arg("x"), py::arg("lambda_"),
        py::arg("tau") = 3.7);
  m.def("mcp_derivative", &mcp_derivative, py::arg("x"), py::arg("lambda_"),
        py::arg("tau") = 2.0);
  m.def("lla_weights",
        [](const Matrix& initial, const std::string& family, double lambda,
           double tau) {
          const PenaltySpec spec =
              make_penalty(family, lambda, tau, std::nullopt, true);
          return lla_weights(initial, spec.family, lambda, spec.tau);
        },
        py::arg("initial"), py::arg("family"), py::arg("lambda_"),
        py::arg("tau") = -1.0);

  m.def("glasso_fit",
        [](const Matrix& s, double lambda, double rho, int max_iter,
           double tol_abs, double tol_rel) {
          return glasso_fit(s, lambda,
                            make_config("l2", rho, max_iter, tol_abs, tol_rel));
        },
        py::arg("s"), py::arg("lambda_"), py::arg("rho") = 1.0,
        py::arg("max_iter") = 1000, py::arg("tol_abs") = 1e-6,
        py::arg("tol_rel") = 1e-4);
  m.def("glasso_omega_update", &glasso_omega_update, py::arg("m"),
        py::arg("rho"));

  m.def("gen_case1", &gen_case1, py::arg("p"));
  m.def("gen_case2", &gen_case2, py::arg("p"));
  m.def("gen_case3", &gen_case3, py::arg("p"), py::arg("seed"));
  m.def("sample_gaussian",
        [](const PrecisionModel& model, Index n, std::uint64_t seed) {
          return sample_gaussian(model, n, seed).values;
        },
        py::arg("model"), py::arg("n"), py::arg("seed"));
  m.def("losses", &losses, py::arg("truth"), py::arg("estimate"));
  m.def("min_eigenvalue_sym", &min_eigenvalue_sym, py::arg("m"));

  m.def("cross_validate",
        [](const Matrix& x, const Vector& grid, int folds,
           const std::string& method, std::uint64_t seed, double rho,
           int max_iter, double tol_abs, double tol_rel, bool center) {
          return cross_validate(make_data_matrix(x), grid, folds,
                                parse_method(method),
                                make_config("l2", rho, max_iter, tol_abs,
                                            tol_rel),
                                seed, center);
        },
        py::arg("x"), py::arg("grid"), py::arg("folds") = 5,
        py::arg("method") = "equals", py::arg("seed") = 1,
        py::arg("rho") = 1.0, py::arg("max_iter") = 1000,
        py::arg("tol_abs") = 1e-6, py::arg("tol_rel") = 1e-4,
        py::arg("center") = false);

  m.def("gen_case",
        [](int id, Index p, std::uint64_t seed) {
          return gen_case(parse_case(id), p, seed);
        },
        py::arg("case_id"), py::arg("p"), py::arg("seed") = 0);
}
