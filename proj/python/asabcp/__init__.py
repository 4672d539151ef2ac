"""Two-stage active-set solver for smooth bound-constrained minimization."""

from asabcp._core import (
    EvalCounters,
    Problem,
    SolveReport,
    builtin,
    estimate_active_set,
    load_qp,
    make_problem,
    multipliers,
    planted_qp,
    problem_names,
    project,
    projected_gradient_solve,
    random_qp,
    solve,
    stationarity_measure,
    __version__,
)

__all__ = [
    "EvalCounters",
    "Problem",
    "SolveReport",
    "builtin",
    "estimate_active_set",
    "load_qp",
    "make_problem",
    "multipliers",
    "planted_qp",
    "problem_names",
    "project",
    "projected_gradient_solve",
    "random_qp",
    "solve",
    "stationarity_measure",
    "__version__",
]
