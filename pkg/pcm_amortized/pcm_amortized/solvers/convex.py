"""Convex solves: LSE-type objectives in u over a box.

For fixed ``x`` every LSE/PLSE/PLSE+ network is ``T log sum exp((<A_i, u> +
c_i) / T)``; the solvers here work on those ``(A, c)`` coefficients, batched
over independent parameters.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..approximators import LseNet, PlseNet, lse_hessian, plse_affine
from ..numerics import ContractViolation, logsumexp, softmax_weights
from .models import BatchSolveResult, Box, SolveResult, SolverOpts
from .projected_newton import projected_newton

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LseBatchObjective:
    """``T log sum_i exp((<A_bi, u> + c_bi) / T)`` for each batch row ``b``."""

    slopes: np.ndarray
    offsets: np.ndarray
    temperature: float

    def scores(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return np.einsum("bim,bm->bi", self.slopes[rows], points) + self.offsets[rows]

    def value(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return logsumexp(self.scores(points, rows), self.temperature)

    def derivatives(self, points: np.ndarray, rows: np.ndarray):
        scores = self.scores(points, rows)
        weights = softmax_weights(scores, self.temperature)
        slopes = self.slopes[rows]
        grads = np.einsum("bi,bim->bm", weights, slopes)
        hessians = lse_hessian(slopes, weights, self.temperature)
        return logsumexp(scores, self.temperature), grads, hessians


def minimize_lse_batch(
    slopes: np.ndarray,
    offsets: np.ndarray,
    temperature: float,
    box: Box,
    opts: SolverOpts,
    starts: Optional[np.ndarray] = None,
) -> BatchSolveResult:
    """Minimize a batch of LSE objectives in u over ``box``.

    Args:
        slopes: ``(B, I, m)`` slope vectors
        offsets: ``(B, I)`` offsets
        temperature: Shared temperature
        box: Feasible box of dimension m
        opts: Solver options
        starts: Optional ``(B, m)`` warm starts; the box center otherwise
    """
    slopes = np.asarray(slopes, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)
    if slopes.ndim != 3 or slopes.shape[2] != box.dim or offsets.shape != slopes.shape[:2]:
        raise ContractViolation(
            "slopes/offsets do not match the box",
            {"slopes": slopes.shape, "offsets": offsets.shape, "box_dim": box.dim},
        )
    if starts is None:
        starts = np.tile(box.center, (slopes.shape[0], 1))
    objective = LseBatchObjective(slopes, offsets, temperature)
    return projected_newton(objective, box, opts, starts)


def lse_coefficients_in_u(net: LseNet, x: np.ndarray, u_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Restrict an LSE over ``z = (x, u)`` to ``u``: slopes ``(I, m)``, offsets ``(I,)``."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size + u_dim != net.dim:
        raise ContractViolation(
            "x and u dimensions do not add up to the network input",
            {"x": x.size, "u": u_dim, "net": net.dim},
        )
    slopes, offsets = net.stacked()
    return slopes[:, x.size :], offsets + slopes[:, : x.size] @ x


def pcm_coefficients(
    net: Union[PlseNet, LseNet],
    X: np.ndarray,
    u_dim: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Slopes ``(B, I, m)`` and offsets ``(B, I)`` of a convex-in-u network."""
    if isinstance(net, PlseNet):
        slopes, offsets, _ = plse_affine(net, X)
        return slopes, offsets
    if isinstance(net, LseNet):
        X = np.asarray(X, dtype=np.float64)
        X = X.reshape(1, -1) if X.ndim <= 1 else X
        pairs = [lse_coefficients_in_u(net, x, u_dim) for x in X]
        return np.stack([p[0] for p in pairs]), np.stack([p[1] for p in pairs])
    raise ContractViolation(f"solve_pcm needs an LSE-type network, got {type(net).__name__}")


def solve_pcm_batch(
    net: Union[PlseNet, LseNet],
    X: np.ndarray,
    box: Box,
    opts: SolverOpts,
) -> BatchSolveResult:
    """:func:`solve_pcm` for every row of ``X (B, n)`` at once."""
    slopes, offsets = pcm_coefficients(net, X, box.dim)
    return minimize_lse_batch(slopes, offsets, net.temperature, box, opts)


def solve_pcm(
    net: Union[PlseNet, LseNet],
    x: np.ndarray,
    box: Box,
    opts: SolverOpts,
) -> SolveResult:
    """Globally minimize a parameterized-convex network over ``box`` at ``x``.

    Starts from the box center, so the result is reproducible even when the
    minimizer is not unique. Stationarity implies global optimality here.

    Returns:
        A :class:`SolveResult`; ``converged`` is False if ``max_iters`` ran
        out or the line search stalled.
    """
    started = time.perf_counter()
    batch = solve_pcm_batch(net, np.asarray(x, dtype=np.float64).reshape(1, -1), box, opts)
    result = batch.item(0, wall_seconds=time.perf_counter() - started)
    if not result.converged:
        logger.warning(f"solve_pcm did not converge after {result.iterations} iterations")
    return result
