"""Mean value sets of divergence-form elliptic operators."""

from ._core import (
    ConfigError,
    Error,
    GeometryError,
    PreconditionError,
    SolverError,
    Grid,
    Operator,
    Solution,
    build_family,
    classify,
    compute_green,
    find_shift,
    run_command,
    scenarios,
    solve_classical,
    solve_mean_value,
    uniqueness_scan,
)

__all__ = [
    "ConfigError",
    "Error",
    "GeometryError",
    "PreconditionError",
    "SolverError",
    "Grid",
    "Operator",
    "Solution",
    "build_family",
    "classify",
    "compute_green",
    "find_shift",
    "run_command",
    "scenarios",
    "solve_classical",
    "solve_mean_value",
    "uniqueness_scan",
]
