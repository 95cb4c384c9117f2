"""Multistart projected Newton for non-convex feed-forward objectives."""

import logging
import time
from dataclasses import dataclass

import numpy as np

from ..approximators import FnnParams, fnn_backward, fnn_forward
from ..numerics import ContractViolation
from .models import BatchSolveResult, Box, SolveResult, SolverOpts
from .projected_newton import projected_newton

logger = logging.getLogger(__name__)

_GOLDEN_SHIFT = 0.6180339887498949
_HESSIAN_STEP = 1e-5
_EIGEN_FLOOR = 1e-8


def stratified_starts(box: Box, count: int) -> np.ndarray:
    """Deterministic start points ``(count, m)`` spread over ``box``.

    Coordinate ``j`` of start ``k`` sits at fraction
    ``frac((k + 0.5) / count + j * 0.618...)`` of the interval.
    """
    k = np.arange(count)[:, None]
    j = np.arange(box.dim)[None, :]
    fractions = np.mod((k + 0.5) / count + j * _GOLDEN_SHIFT, 1.0)
    return box.lower + fractions * (box.upper - box.lower)


@dataclass(frozen=True)
class FnnBatchObjective:
    """Scalar FNN over ``(x, u)`` with ``x`` fixed per batch row."""

    net: FnnParams
    xs: np.ndarray

    def _inputs(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return np.concatenate([self.xs[rows], points], axis=1)

    def value(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        output, _ = fnn_forward(self.net, self._inputs(points, rows))
        return output[:, 0]

    def gradient(self, points: np.ndarray, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        output, cache = fnn_forward(self.net, self._inputs(points, rows))
        input_grad, _ = fnn_backward(self.net, cache, np.ones_like(output))
        return output[:, 0], input_grad[:, self.xs.shape[1] :]

    def derivatives(self, points: np.ndarray, rows: np.ndarray):
        values, grads = self.gradient(points, rows)
        dim = points.shape[1]
        hessians = np.empty((points.shape[0], dim, dim))
        # Central differences of the analytic gradient.
        for j in range(dim):
            shift = np.zeros(dim)
            shift[j] = _HESSIAN_STEP
            _, forward = self.gradient(points + shift, rows)
            _, backward = self.gradient(points - shift, rows)
            hessians[:, :, j] = (forward - backward) / (2.0 * _HESSIAN_STEP)
        hessians = 0.5 * (hessians + np.swapaxes(hessians, 1, 2))
        eigenvalues, vectors = np.linalg.eigh(hessians)
        floor = _EIGEN_FLOOR * np.maximum(np.max(np.abs(eigenvalues), axis=1, keepdims=True), 1.0)
        eigenvalues = np.maximum(eigenvalues, floor)
        hessians = np.einsum("bij,bj,bkj->bik", vectors, eigenvalues, vectors)
        return values, grads, hessians


def _check_net(net: FnnParams, x_dim: int, box: Box) -> None:
    if net.output_dim != 1 or net.input_dim != x_dim + box.dim:
        raise ContractViolation(
            "multistart needs a scalar network over (x, u)",
            {"input": net.input_dim, "output": net.output_dim, "x": x_dim, "u": box.dim},
        )


def solve_multistart_batch(net: FnnParams, X: np.ndarray, box: Box, opts: SolverOpts) -> BatchSolveResult:
    """Best-of-``multistart_count`` local solves for every row of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    X = X.reshape(1, -1) if X.ndim <= 1 else X
    _check_net(net, X.shape[1], box)
    count = opts.multistart_count
    starts = np.tile(stratified_starts(box, count), (X.shape[0], 1))
    objective = FnnBatchObjective(net, np.repeat(X, count, axis=0))
    runs = projected_newton(objective, box, opts, starts)

    values = runs.values.reshape(X.shape[0], count)
    best = np.argmin(values, axis=1)
    picked = np.arange(X.shape[0]) * count + best
    return BatchSolveResult(
        minimizers=runs.minimizers[picked],
        values=runs.values[picked],
        iterations=runs.iterations.reshape(X.shape[0], count).sum(axis=1),
        converged=runs.converged[picked],
    )


def solve_multistart(net: FnnParams, x: np.ndarray, box: Box, opts: SolverOpts) -> SolveResult:
    """Best local minimizer of an FNN in ``u`` over ``box`` at ``x``.

    Runs projected Newton from ``multistart_count`` stratified starts; the
    result is converged only if the best run reached ``grad_tol``.
    """
    started = time.perf_counter()
    batch = solve_multistart_batch(net, np.asarray(x, dtype=np.float64).reshape(1, -1), box, opts)
    result = batch.item(0, wall_seconds=time.perf_counter() - started)
    if not result.converged:
        logger.warning("solve_multistart: best start did not reach grad_tol")
    return result
