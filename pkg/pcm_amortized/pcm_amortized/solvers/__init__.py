"""Box-constrained solvers: convex (PCM), DCA (DLSE), multistart (FNN) and the grid oracle."""

from .convex import (
    LseBatchObjective,
    lse_coefficients_in_u,
    minimize_lse_batch,
    pcm_coefficients,
    solve_pcm,
    solve_pcm_batch,
)
from .dca import solve_dca
from .exceptions import (
    GridTooLargeError,
    NonFiniteObjectiveError,
    SolverError,
    SolverNotConvergedError,
)
from .grid import brute_force_grid, grid_axes, grid_local_minima_1d, grid_minimizer_set
from .models import BatchSolveResult, Box, SolveResult, SolverOpts
from .multistart import (
    FnnBatchObjective,
    solve_multistart,
    solve_multistart_batch,
    stratified_starts,
)
from .projected_newton import (
    BatchObjective,
    clamped_coordinates,
    projected_gradient_norm,
    projected_newton,
)

__all__ = [
    "LseBatchObjective",
    "lse_coefficients_in_u",
    "minimize_lse_batch",
    "pcm_coefficients",
    "solve_pcm",
    "solve_pcm_batch",
    "solve_dca",
    "GridTooLargeError",
    "NonFiniteObjectiveError",
    "SolverError",
    "SolverNotConvergedError",
    "brute_force_grid",
    "grid_axes",
    "grid_local_minima_1d",
    "grid_minimizer_set",
    "BatchSolveResult",
    "Box",
    "SolveResult",
    "SolverOpts",
    "FnnBatchObjective",
    "solve_multistart",
    "solve_multistart_batch",
    "stratified_starts",
    "BatchObjective",
    "clamped_coordinates",
    "projected_gradient_norm",
    "projected_newton",
]
