"""Batched projected Newton / projected gradient method for box constraints.

Each row of the batch is an independent problem sharing the box. An
iteration takes, per row, a Newton step on the free coordinates (gradient
step on the coordinates held at a bound by the gradient) and backtracks
along the projection arc ``P(u + t d)`` until the Armijo condition
``f(P(u + t d)) <= f(u) + c * g . (P(u + t d) - u)`` holds.
"""

import logging
from typing import Optional, Protocol

import numpy as np

from .exceptions import NonFiniteObjectiveError
from .models import BatchSolveResult, Box, SolverOpts

logger = logging.getLogger(__name__)

# Relative slack in the Armijo test for objective changes at rounding level.
_ROUNDING_SLACK = 16.0 * np.finfo(np.float64).eps
_ACTIVE_MARGIN = 1e-9


class BatchObjective(Protocol):
    """Objective over a batch of independent problems.

    ``rows`` selects which problems of the batch the points belong to.
    """

    def value(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray: ...

    def derivatives(
        self, points: np.ndarray, rows: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, Optional[np.ndarray]]: ...


def projected_gradient_norm(points: np.ndarray, grads: np.ndarray, box: Box) -> np.ndarray:
    """Row-wise ``|u - P(u - g)|_inf``."""
    return np.max(np.abs(points - box.project(points - grads)), axis=-1)


def clamped_coordinates(points: np.ndarray, grads: np.ndarray, box: Box, margin: float) -> np.ndarray:
    """Coordinates at a bound with the gradient pushing outward."""
    at_lower = (points - box.lower <= margin) & (grads > 0.0)
    at_upper = (box.upper - points <= margin) & (grads < 0.0)
    return at_lower | at_upper


def _check_finite(values: np.ndarray, grads: np.ndarray, iteration: int) -> None:
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(grads))):
        raise NonFiniteObjectiveError(details={"iteration": iteration})


def _newton_directions(
    grads: np.ndarray,
    hessians: np.ndarray,
    clamped: np.ndarray,
) -> np.ndarray:
    """Reduced Newton directions; clamped rows/columns are replaced by identity."""
    dim = grads.shape[1]
    free = ~clamped
    mask = free[:, :, None] & free[:, None, :]
    reduced = np.where(mask, hessians, 0.0)
    eye = np.eye(dim)[None, :, :]
    reduced = reduced + np.where(clamped[:, :, None], eye, 0.0)
    scale = np.max(np.abs(np.diagonal(reduced, axis1=1, axis2=2)), axis=1)
    damping = 1e-12 * np.maximum(scale, 1.0)
    reduced = reduced + damping[:, None, None] * eye
    rhs = np.where(free, -grads, 0.0)
    try:
        directions = np.linalg.solve(reduced, rhs[:, :, None])[:, :, 0]
    except np.linalg.LinAlgError:
        directions = np.full_like(grads, np.nan)
    directions = np.where(clamped, -grads, directions)
    # Fall back to steepest descent where the Newton step is unusable.
    descent = np.sum(np.where(free, grads * directions, 0.0), axis=1)
    bad = ~np.all(np.isfinite(directions), axis=1) | (descent > 0.0)
    if np.any(bad):
        directions[bad] = -grads[bad]
    return directions


def projected_newton(
    objective: BatchObjective,
    box: Box,
    opts: SolverOpts,
    starts: np.ndarray,
) -> BatchSolveResult:
    """Minimize every problem of the batch over ``box``.

    Args:
        objective: Batched objective with value/derivative oracles
        box: Common feasible box
        opts: Tolerances, iteration limits and line-search constants
        starts: Start points ``(B, m)``; projected onto the box first

    Returns:
        Per-row minimizers (inside the box exactly), values, iteration counts
        and convergence flags.

    Raises:
        NonFiniteObjectiveError: If the objective produces NaN/inf.
    """
    points = box.project(np.array(starts, dtype=np.float64, ndmin=2))
    batch = points.shape[0]
    rows_all = np.arange(batch)
    values, grads, hessians = objective.derivatives(points, rows_all)
    values = np.array(values, dtype=np.float64)
    grads = np.array(grads, dtype=np.float64)
    if hessians is not None:
        hessians = np.array(hessians, dtype=np.float64)
    _check_finite(values, grads, 0)

    iterations = np.zeros(batch, dtype=np.int64)
    converged = np.zeros(batch, dtype=bool)
    running = np.ones(batch, dtype=bool)

    for iteration in range(opts.max_iters + 1):
        pg_norm = projected_gradient_norm(points, grads, box)
        newly_converged = running & (pg_norm <= opts.grad_tol)
        converged |= newly_converged
        running &= ~newly_converged
        if not np.any(running) or iteration == opts.max_iters:
            break

        rows = np.flatnonzero(running)
        u, f, g = points[rows], values[rows], grads[rows]
        margin = np.minimum(_ACTIVE_MARGIN + pg_norm[rows], 1e-6)[:, None]
        clamped = clamped_coordinates(u, g, box, margin)
        if opts.use_newton and hessians is not None:
            directions = _newton_directions(g, hessians[rows], clamped)
        else:
            directions = -g

        step = np.ones(rows.size)
        accepted = np.zeros(rows.size, dtype=bool)
        new_u = u.copy()
        new_f = f.copy()
        for _ in range(opts.max_backtracks):
            pending = np.flatnonzero(~accepted)
            if pending.size == 0:
                break
            trial = box.project(u[pending] + step[pending, None] * directions[pending])
            trial_f = objective.value(trial, rows[pending])
            decrease = np.sum(g[pending] * (trial - u[pending]), axis=1)
            slack = _ROUNDING_SLACK * (1.0 + np.abs(f[pending]))
            ok = np.isfinite(trial_f) & (trial_f <= f[pending] + opts.armijo_c * decrease + slack)
            ok &= np.any(trial != u[pending], axis=1)
            hit = pending[ok]
            new_u[hit] = trial[ok]
            new_f[hit] = trial_f[ok]
            accepted[hit] = True
            step[pending[~ok]] *= opts.armijo_shrink

        stalled = rows[~accepted]
        if stalled.size:
            logger.debug(f"Line search stalled for {stalled.size} problem(s) at iteration {iteration}")
            running[stalled] = False

        moved = rows[accepted]
        if moved.size:
            points[moved] = new_u[accepted]
            f_new, g_new, h_new = objective.derivatives(points[moved], moved)
            _check_finite(f_new, g_new, iteration + 1)
            values[moved] = f_new
            grads[moved] = g_new
            if hessians is not None and h_new is not None:
                hessians[moved] = h_new
            iterations[moved] += 1

    return BatchSolveResult(points, values, iterations, converged)
