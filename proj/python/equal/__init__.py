"""Sparse precision-matrix estimation via penalized quadratic losses.

Thin wrapper over the compiled core; see the README for the full API.
"""

from ._core import (
    CvResult,
    FitResult,
    LossReport,
    PrecisionModel,
    SolutionPath,
    ThinSVD,
    cross_validate,
    fit,
    gen_case,
    gen_case1,
    gen_case2,
    gen_case3,
    glasso_fit,
    glasso_omega_update,
    kkt_residual,
    kron,
    lambda_grid,
    lla_weights,
    losses,
    mcp_derivative,
    min_abs_symmetrize,
    min_eigenvalue_sym,
    objective,
    ridge_inverse_l1,
    sample_covariance,
    sample_gaussian,
    scad_derivative,
    soft_threshold,
    solution_path,
    solve_l1,
    solve_l2,
    thin_svd_gram,
)

__all__ = [
    "CvResult",
    "FitResult",
    "LossReport",
    "PrecisionModel",
    "SolutionPath",
    "ThinSVD",
    "cross_validate",
    "fit",
    "gen_case",
    "gen_case1",
    "gen_case2",
    "gen_case3",
    "glasso_fit",
    "glasso_omega_update",
    "kkt_residual",
    "kron",
    "lambda_grid",
    "lla_weights",
    "losses",
    "mcp_derivative",
    "min_abs_symmetrize",
    "min_eigenvalue_sym",
    "objective",
    "ridge_inverse_l1",
    "sample_covariance",
    "sample_gaussian",
    "scad_derivative",
    "soft_threshold",
    "solution_path",
    "solve_l1",
    "solve_l2",
    "thin_svd_gram",
]
