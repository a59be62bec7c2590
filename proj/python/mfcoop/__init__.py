"""Linear-quadratic mean field cooperation lab (Python bindings)."""

from ._core import (
    AdjointDiagnostic,
    CostReport,
    Equilibrium,
    Error,
    IterationTrace,
    ModelParams,
    PPartialEquilibrium,
    PStarResult,
    TimeGrid,
    ValueMatchingReport,
    best_response,
    check_convergence_condition,
    cost_report,
    identify_limit,
    make_grid,
    p_star,
    poi_adjoint,
    run_constant_deviation,
    run_fictitious_play,
    run_fixed_point,
    solve_lambda_interpolated,
    solve_mfc,
    solve_mfg,
    solve_p_partial,
    validate,
    verify_value_matching,
)

__all__ = [name for name in dir() if not name.startswith("_")]
