"""Difference-of-convex algorithm for DLSE networks."""

import logging
import time
from typing import Optional

import numpy as np

from ..approximators import DlseNet
from .convex import LseBatchObjective, lse_coefficients_in_u, minimize_lse_batch
from .models import Box, SolveResult, SolverOpts

logger = logging.getLogger(__name__)


def solve_dca(
    net: DlseNet,
    u_box: Box,
    x: np.ndarray,
    opts: SolverOpts,
    start: Optional[np.ndarray] = None,
) -> SolveResult:
    """Locally minimize ``lse_pos(x, u) - lse_neg(x, u)`` over ``u_box``.

    Every outer iteration linearizes ``lse_neg`` at the current iterate and
    minimizes the convex remainder, warm-started at the iterate. Iterates
    that would increase the objective are rejected, so ``trace`` is
    non-increasing.

    Args:
        net: DLSE network over ``z = (x, u)``
        u_box: Feasible box for u
        x: Parameter slice (may be empty)
        opts: ``max_iters`` bounds both outer and inner iterations
        start: Initial iterate; the box center otherwise

    Returns:
        A local minimizer with the per-iteration objective ``trace``.
    """
    started = time.perf_counter()
    pos_slopes, pos_offsets = lse_coefficients_in_u(net.lse_pos, x, u_box.dim)
    neg_slopes, neg_offsets = lse_coefficients_in_u(net.lse_neg, x, u_box.dim)
    temperature = net.temperature
    positive = LseBatchObjective(pos_slopes[None], pos_offsets[None], temperature)
    negative = LseBatchObjective(neg_slopes[None], neg_offsets[None], temperature)
    row = np.zeros(1, dtype=np.int64)

    def objective(u: np.ndarray) -> float:
        point = u[None, :]
        return float(positive.value(point, row)[0] - negative.value(point, row)[0])

    u = u_box.project(u_box.center if start is None else np.asarray(start, dtype=np.float64))
    value = objective(u)
    trace = [value]
    converged = False
    iterations = 0

    while iterations < opts.max_iters:
        _, neg_grad, _ = negative.derivatives(u[None, :], row)
        inner = minimize_lse_batch(
            (pos_slopes - neg_grad[0])[None],
            pos_offsets[None],
            temperature,
            u_box,
            opts,
            starts=u[None, :],
        )
        candidate = inner.minimizers[0]
        candidate_value = objective(candidate)
        iterations += 1
        if candidate_value > value:
            logger.debug(f"DCA step {iterations} rejected: {candidate_value} > {value}")
            converged = bool(inner.converged[0])
            break
        movement = float(np.max(np.abs(candidate - u)))
        change = value - candidate_value
        u, value = candidate, candidate_value
        trace.append(value)
        if change < opts.grad_tol or movement < opts.grad_tol:
            converged = bool(inner.converged[0])
            break

    if not converged:
        logger.warning(f"solve_dca stopped after {iterations} outer iterations without converging")
    return SolveResult(
        minimizer=u.copy(),
        value=value,
        iterations=iterations,
        converged=converged,
        wall_seconds=time.perf_counter() - started,
        trace=tuple(trace),
    )
