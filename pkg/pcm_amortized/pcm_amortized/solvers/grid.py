"""Exhaustive grid oracle, the reference every solver and metric is tested against."""

import logging
import time
from typing import Callable

import numpy as np

from .exceptions import GridTooLargeError
from .models import Box, SolveResult

logger = logging.getLogger(__name__)

DEFAULT_MAX_POINTS = 20_000_000
_CHUNK = 1 << 16


def grid_axes(box: Box, points_per_dim: int) -> list[np.ndarray]:
    """Per-coordinate grids including both endpoints."""
    if points_per_dim < 2:
        raise ValueError(f"points_per_dim must be >= 2, got {points_per_dim}")
    return [np.linspace(lo, hi, points_per_dim) for lo, hi in zip(box.lower, box.upper)]


def brute_force_grid(
    f: Callable[[np.ndarray], np.ndarray],
    box: Box,
    points_per_dim: int,
    max_points: int = DEFAULT_MAX_POINTS,
) -> SolveResult:
    """Minimum of ``f`` over the regular grid on ``box``.

    Args:
        f: Batched objective mapping ``(N, m)`` points to ``(N,)`` values
        box: Grid domain
        points_per_dim: Points per coordinate, endpoints included
        max_points: Overflow guard on ``points_per_dim ** m``

    Returns:
        The first grid point (row-major order) attaining the minimum.

    Raises:
        GridTooLargeError: If the grid exceeds ``max_points``.
    """
    total = points_per_dim ** box.dim
    if total > max_points:
        raise GridTooLargeError(points=total, limit=max_points)
    started = time.perf_counter()
    axes = grid_axes(box, points_per_dim)
    shape = (points_per_dim,) * box.dim

    best_value = np.inf
    best_point = box.center
    for begin in range(0, total, _CHUNK):
        flat = np.arange(begin, min(begin + _CHUNK, total))
        index = np.unravel_index(flat, shape)
        points = np.stack([axis[i] for axis, i in zip(axes, index)], axis=1)
        values = np.asarray(f(points), dtype=np.float64).reshape(-1)
        k = int(np.argmin(values))
        if values[k] < best_value:
            best_value = float(values[k])
            best_point = points[k].copy()

    logger.debug(f"Grid oracle evaluated {total} points, min {best_value}")
    return SolveResult(
        minimizer=best_point,
        value=best_value,
        iterations=0,
        converged=bool(np.isfinite(best_value)),
        wall_seconds=time.perf_counter() - started,
    )


def grid_minimizer_set(values: np.ndarray, points: np.ndarray, tolerance: float) -> np.ndarray:
    """Grid points whose value is within ``tolerance`` of the grid minimum."""
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    points = np.asarray(points, dtype=np.float64)
    points = points.reshape(-1, 1) if points.ndim == 1 else points
    return points[values <= np.min(values) + tolerance]


def grid_local_minima_1d(values: np.ndarray) -> np.ndarray:
    """Values at discrete local minima of a sampled 1D function (endpoints included)."""
    values = np.asarray(values, dtype=np.float64)
    left = np.concatenate([[np.inf], values[:-1]])
    right = np.concatenate([values[1:], [np.inf]])
    return values[(values <= left) & (values <= right)]
