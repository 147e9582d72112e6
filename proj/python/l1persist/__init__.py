"""l1-constrained empirical risk minimization: solvers, oracles, simulations."""

from ._core import (
    Dataset,
    Loss,
    NoiseConvention,
    SolveConfig,
    SolveReport,
    best_subset,
    deviation_bound,
    empirical_deviation_rate,
    empirical_risk,
    gen_null,
    gen_section4,
    gen_sparse_linear,
    grid_best,
    kkt_residual,
    lambda_sweep,
    persistence_curve,
    project_l1,
    project_l2,
    read_dataset,
    ridge_vs_l1_demo,
    risk_gradient,
    soft_threshold,
    solve_constrained,
    solve_penalized,
    solve_ridge_constrained,
    sparsify,
    true_risk_gaussian,
    unit_sparse_beta,
    write_dataset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
