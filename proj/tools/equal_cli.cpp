// Command-line front end: estimate, path, cv, simulate, bench.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "equal/experiments.hpp"
#include "equal/io.hpp"

namespace {

using json = nlohmann::json;
using namespace equal;

struct CommonOpts {
  std::string input;
  std::string output;
  std::string json_path;
  std::string method = "equals";
  std::string family = "lasso";
  double lambda = -1.0;
  double tau = -1.0;  // family default when negative
  int grid_size = 50;
  int folds = 5;
  double rho = 1.0;
  double tol_abs = 1e-6;
  double tol_rel = 1e-4;
  int max_iter = 1000;
  std::uint64_t seed = 1;
  bool center = false;
  bool header = false;
  bool no_penalize_diagonal = false;
};

const std::map<std::string, Method> kMethods = {
    {"equal", Method::Equal},
    {"equals", Method::Equals},
    {"glasso", Method::Glasso},
};

const std::map<std::string, PenaltyFamily> kFamilies = {
    {"lasso", PenaltyFamily::Lasso},
    {"scad", PenaltyFamily::Scad},
    {"mcp", PenaltyFamily::Mcp},
};

std::string method_name(Method m) {
  switch (m) {
    case Method::Equal: return "equal";
    case Method::Equals: return "equals";
    case Method::Glasso: return "glasso";
  }
  return "?";
}

std::string family_name(PenaltyFamily f) {
  switch (f) {
    case PenaltyFamily::Lasso: return "lasso";
    case PenaltyFamily::Scad: return "scad";
    case PenaltyFamily::Mcp: return "mcp";
  }
  return "?";
}

double family_tau(PenaltyFamily family, double tau) {
  if (tau > 0.0) return tau;
  return family == PenaltyFamily::Mcp ? 2.0 : 3.7;
}

AdmmConfig admm_config(const CommonOpts& opts, Method method) {
  AdmmConfig cfg;
  cfg.loss = method == Method::Equal ? Loss::L1 : Loss::L2;
  cfg.rho = opts.rho;
  cfg.tol_abs = opts.tol_abs;
  cfg.tol_rel = opts.tol_rel;
  cfg.max_iter = opts.max_iter;
  return cfg;
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json sidecar(const FitResult& fit, double lambda) {
  return json{{"lambda", lambda},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"objective", finite_or_null(fit.objective)},
              {"kkt_residual", finite_or_null(fit.kkt_residual)},
              {"min_eigen", min_eigenvalue_sym(fit.estimate)},
              {"sparsity", sparsity_per_row(fit.estimate)}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out.good()) throw InvalidInput("write to '" + path + "' failed");
}

std::string default_json_path(const CommonOpts& opts) {
  return opts.json_path.empty() ? opts.output + ".json" : opts.json_path;
}

// Fits, and for nonconvex families chains the one-step LLA refit at the
// same lambda from the base lasso solution.
FitResult fit_with_family(const DataMatrix& x, Method method,
                          PenaltyFamily family, double lambda,
                          const CommonOpts& opts) {
  const AdmmConfig cfg = admm_config(opts, method);
  if (method == Method::Glasso) {
    return glasso_fit(sample_covariance(x, opts.center), lambda, cfg);
  }
  const ThinSVD svd = thin_svd_gram(x, opts.center);
  const PenaltySpec base =
      PenaltySpec::lasso(lambda, !opts.no_penalize_diagonal);
  FitResult fitted = fit(svd, base, cfg);
  if (family != PenaltyFamily::Lasso) {
    fitted = lla_refit(svd, fitted, family, lambda, family_tau(family, opts.tau),
                       cfg);
  }
  return fitted;
}

int cmd_estimate(const CommonOpts& opts) {
  if (opts.lambda < 0.0) {
    std::cerr << "error: estimate requires --lambda >= 0\n";
    return 2;
  }
  const Method method = kMethods.at(opts.method);
  const PenaltyFamily family = kFamilies.at(opts.family);
  if (method == Method::Glasso && family != PenaltyFamily::Lasso) {
    std::cerr << "error: glasso supports --family lasso only\n";
    return 2;
  }
  const DataMatrix x =
      make_data_matrix(read_csv_matrix(opts.input, opts.header));
  const FitResult fitted =
      fit_with_family(x, method, family, opts.lambda, opts);

  write_csv_matrix(opts.output, fitted.estimate);
  write_json(default_json_path(opts), sidecar(fitted, opts.lambda));
  return 0;
}

int cmd_path(const CommonOpts& opts) {
  const Method method = kMethods.at(opts.method);
  const PenaltyFamily family = kFamilies.at(opts.family);
  if (method == Method::Glasso && family != PenaltyFamily::Lasso) {
    std::cerr << "error: glasso supports --family lasso only\n";
    return 2;
  }
  const DataMatrix x =
      make_data_matrix(read_csv_matrix(opts.input, opts.header));
  const Matrix s = sample_covariance(x, opts.center);
  const Vector grid = lambda_grid(s, x.n(), opts.grid_size);
  const AdmmConfig cfg = admm_config(opts, method);

  std::vector<FitResult> fits(static_cast<std::size_t>(grid.size()));
  if (method == Method::Glasso) {
    walk_glasso_path(s, grid, cfg, [&](Index i, const FitResult& r) {
      fits[static_cast<std::size_t>(i)] = r;
    });
  } else {
    const ThinSVD svd = thin_svd_gram(x, opts.center);
    const PenaltySpec base = PenaltySpec::lasso(0.0, !opts.no_penalize_diagonal);
    walk_path(svd, grid, base, cfg, [&](Index i, const FitResult& r) {
      if (family == PenaltyFamily::Lasso) {
        fits[static_cast<std::size_t>(i)] = r;
      } else {
        fits[static_cast<std::size_t>(i)] = lla_refit(
            svd, r, family, grid(i), family_tau(family, opts.tau), cfg);
      }
    });
  }

  std::ofstream out(opts.output);
  if (!out) throw InvalidInput("cannot write '" + opts.output + "'");
  out << "lambda,sparsity,iterations,converged,objective,kkt_residual,"
         "min_eigen\n";
  char buf[256];
  for (Index i = 0; i < grid.size(); ++i) {
    const FitResult& r = fits[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%d,%d,%.12g,%.12g,%.12g\n",
                  grid(i), sparsity_per_row(r.estimate), r.iterations,
                  r.converged ? 1 : 0, r.objective, r.kkt_residual,
                  min_eigenvalue_sym(r.estimate));
    out << buf;
  }
  if (!out.good()) throw InvalidInput("write to '" + opts.output + "' failed");
  return 0;
}

int cmd_cv(const CommonOpts& opts) {
  const Method method = kMethods.at(opts.method);
  if (kFamilies.at(opts.family) != PenaltyFamily::Lasso) {
    std::cerr << "error: cv selects lambda for --family lasso only\n";
    return 2;
  }
  const DataMatrix x =
      make_data_matrix(read_csv_matrix(opts.input, opts.header));
  const Matrix s = sample_covariance(x, opts.center);
  const Vector grid = lambda_grid(s, x.n(), opts.grid_size);
  const AdmmConfig cfg = admm_config(opts, method);

  const CvResult cv = cross_validate(x, grid, opts.folds, method, cfg,
                                     opts.seed, opts.center);
  const FitResult refit =
      fit_method(x, method, cv.best_lambda, cfg, opts.center);

  json j;
  j["best_lambda"] = cv.best_lambda;
  j["fold_count"] = cv.fold_count;
  j["lambdas"] = std::vector<double>(grid.data(), grid.data() + grid.size());
  std::vector<json> curve;
  for (Index i = 0; i < cv.cv_curve.size(); ++i) {
    curve.push_back(finite_or_null(cv.cv_curve(i)));
  }
  j["cv_curve"] = curve;
  j["refit"] = sidecar(refit, cv.best_lambda);

  write_csv_matrix(opts.output, refit.estimate);
  write_json(default_json_path(opts), j);
  return 0;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) methods.push_back(kMethods.at(name));
  return methods;
}

int cmd_simulate(const CommonOpts& opts, int case_id, Index p, Index n,
                 int reps, const std::vector<std::string>& method_names,
                 const std::vector<std::string>& family_names) {
  const CaseKind kind = case_id == 1   ? CaseKind::Case1
                        : case_id == 2 ? CaseKind::Case2
                                       : CaseKind::Case3;
  std::vector<PenaltyFamily> families;
  for (const auto& name : family_names) families.push_back(kFamilies.at(name));

  AdmmConfig cfg = admm_config(opts, Method::Equals);
  const std::vector<SimRow> rows =
      run_simulation(kind, p, n, reps, parse_methods(method_names), families,
                     opts.grid_size, opts.folds, cfg, opts.seed);

  std::ofstream out(opts.output);
  if (!out) throw InvalidInput("cannot write '" + opts.output + "'");
  out << "case,p,n,rep,method,family,lambda,loss1,loss2,loss3,loss4,"
         "min_eigen\n";
  char buf[512];
  for (const SimRow& row : rows) {
    std::string loss3 = "NA";
    if (row.report.loss3) {
      std::snprintf(buf, sizeof(buf), "%.12g", *row.report.loss3);
      loss3 = buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "%d,%lld,%lld,%d,%s,%s,%.12g,%.12g,%.12g,%s,%.12g,%.12g\n",
                  case_id, static_cast<long long>(row.p),
                  static_cast<long long>(row.n), row.rep,
                  method_name(row.method).c_str(),
                  family_name(row.family).c_str(), row.lambda,
                  row.report.loss1, row.report.loss2, loss3.c_str(),
                  row.report.loss4, row.report.min_eigen);
    out << buf;
  }
  if (!out.good()) throw InvalidInput("write to '" + opts.output + "' failed");
  return 0;
}

int cmd_bench(const CommonOpts& opts, const std::vector<int>& case_ids,
              const std::vector<long long>& p_list, Index n, int reps,
              const std::vector<std::string>& method_names) {
  std::vector<CaseKind> kinds;
  for (int id : case_ids) {
    kinds.push_back(id == 1   ? CaseKind::Case1
                    : id == 2 ? CaseKind::Case2
                              : CaseKind::Case3);
  }
  std::vector<Index> sizes(p_list.begin(), p_list.end());
  AdmmConfig cfg = admm_config(opts, Method::Equals);
  const std::vector<TimingRow> rows =
      bench_timing(kinds, sizes, n, opts.grid_size, parse_methods(method_names),
                   reps, cfg, opts.seed);

  std::ofstream out(opts.output);
  if (!out) throw InvalidInput("cannot write '" + opts.output + "'");
  out << "case,p,n,method,grid_size,reps,mean_seconds,sd_seconds\n";
  char buf[256];
  for (const TimingRow& row : rows) {
    const int case_id = row.kind == CaseKind::Case1   ? 1
                        : row.kind == CaseKind::Case2 ? 2
                                                      : 3;
    std::snprintf(buf, sizeof(buf), "%d,%lld,%lld,%s,%d,%d,%.6f,%.6f\n",
                  case_id, static_cast<long long>(row.p),
                  static_cast<long long>(row.n),
                  method_name(row.method).c_str(), row.grid_size, row.reps,
                  row.mean_seconds, row.sd_seconds);
    out << buf;
  }
  if (!out.good()) throw InvalidInput("write to '" + opts.output + "' failed");
  return 0;
}

void add_admm_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--rho", opts.rho, "ADMM step size");
  cmd->add_option("--tol-abs", opts.tol_abs, "absolute stopping tolerance");
  cmd->add_option("--tol-rel", opts.tol_rel, "relative stopping tolerance");
  cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
}

void add_penalty_options(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--family", opts.family, "penalty family")
      ->check(CLI::IsMember({"lasso", "scad", "mcp"}));
  cmd->add_option("--tau", opts.tau, "concavity parameter (scad/mcp)");
  cmd->add_flag("--no-penalize-diagonal", opts.no_penalize_diagonal,
                "leave the diagonal unpenalized");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse precision-matrix estimation via penalized quadratic "
               "losses (ADMM with closed-form thin-SVD updates)"};
  app.require_subcommand(1);

  CommonOpts opts;
  int case_id = 2;
  long long p = 100;
  long long n = 200;
  int reps = 1;
  std::vector<int> case_ids = {1};
  std::vector<long long> p_list;
  std::vector<std::string> method_names = {"equal", "equals", "glasso"};
  std::vector<std::string> family_names = {"lasso"};

  const auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", opts.method, "estimator")
        ->check(CLI::IsMember({"equal", "equals", "glasso"}));
  };
  const auto add_io = [&](CLI::App* cmd, bool with_json) {
    cmd->add_option("-i,--input", opts.input, "input CSV (rows = samples)")
        ->required();
    cmd->add_option("-o,--output", opts.output, "output file")->required();
    if (with_json) {
      cmd->add_option("--json", opts.json_path,
                      "JSON diagnostics path (default: <output>.json)");
    }
    cmd->add_flag("--header", opts.header, "input CSV has a header row");
    cmd->add_flag("--center", opts.center, "center columns before covariance");
  };

  CLI::App* estimate = app.add_subcommand(
      "estimate", "estimate a precision matrix at one lambda");
  add_io(estimate, true);
  add_method(estimate);
  estimate->add_option("--lambda", opts.lambda, "penalty level")->required();
  add_penalty_options(estimate, opts);
  add_admm_options(estimate, opts);

  CLI::App* path =
      app.add_subcommand("path", "solve a solution path over a lambda grid");
  add_io(path, false);
  add_method(path);
  path->add_option("--grid-size", opts.grid_size, "number of lambda values");
  add_penalty_options(path, opts);
  add_admm_options(path, opts);

  CLI::App* cv = app.add_subcommand(
      "cv", "pick lambda by k-fold cross-validation and refit");
  add_io(cv, true);
  add_method(cv);
  cv->add_option("--grid-size", opts.grid_size, "number of lambda values");
  cv->add_option("--folds", opts.folds, "number of folds");
  cv->add_option("--seed", opts.seed, "fold-shuffle seed");
  cv->add_option("--family", opts.family, "penalty family (lasso only)")
      ->check(CLI::IsMember({"lasso", "scad", "mcp"}));
  add_admm_options(cv, opts);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "synthetic accuracy study with CV-chosen lambda");
  simulate->add_option("-o,--output", opts.output, "output CSV")->required();
  simulate->add_option("--case", case_id, "precision model (1, 2, or 3)")
      ->check(CLI::Range(1, 3));
  simulate->add_option("--p", p, "dimension")->required();
  simulate->add_option("--n", n, "sample size");
  simulate->add_option("--reps", reps, "replications");
  simulate->add_option("--seed", opts.seed, "seed");
  simulate->add_option("--methods", method_names, "estimators to run")
      ->delimiter(',');
  simulate->add_option("--families", family_names, "penalty families")
      ->delimiter(',');
  simulate->add_option("--grid-size", opts.grid_size, "lambda grid size");
  simulate->add_option("--folds", opts.folds, "CV folds");
  simulate->add_option("--tau", opts.tau, "concavity parameter");
  add_admm_options(simulate, opts);

  CLI::App* bench =
      app.add_subcommand("bench", "time solution paths over dimensions");
  bench->add_option("-o,--output", opts.output, "output CSV")->required();
  bench->add_option("--cases", case_ids, "precision models")->delimiter(',');
  bench->add_option("--p-list", p_list, "dimensions")
      ->required()
      ->delimiter(',');
  bench->add_option("--n", n, "sample size");
  bench->add_option("--reps", reps, "timed repetitions per cell");
  bench->add_option("--seed", opts.seed, "seed");
  bench->add_option("--methods", method_names, "estimators to time")
      ->delimiter(',');
  bench->add_option("--grid-size", opts.grid_size, "lambda grid size");
  add_admm_options(bench, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(estimate)) return cmd_estimate(opts);
    if (app.got_subcommand(path)) return cmd_path(opts);
    if (app.got_subcommand(cv)) return cmd_cv(opts);
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(opts, case_id, p, n, reps, method_names,
                          family_names);
    }
    if (app.got_subcommand(bench)) {
      return cmd_bench(opts, case_ids, p_list, n, reps, method_names);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
