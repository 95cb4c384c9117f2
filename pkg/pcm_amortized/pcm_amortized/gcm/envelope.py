"""Lower convex envelopes of sampled 1D functions and the slice checks built on them."""

import logging
from typing import Callable, Sequence

import numpy as np

from .models import ContinuityReport, GridFunction, SliceReport

logger = logging.getLogger(__name__)

# Batched objective ``(X (K, n), U (K, 1)) -> (K,)``.
Objective = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _lower_hull(us: np.ndarray, fs: np.ndarray) -> list[int]:
    """Indices of the lower hull vertices (monotone chain on sorted points)."""
    hull: list[int] = []
    for k in range(us.size):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            cross = (us[j] - us[i]) * (fs[k] - fs[i]) - (fs[j] - fs[i]) * (us[k] - us[i])
            if cross > 0:
                break
            hull.pop()
        hull.append(k)
    return hull


def lower_convex_envelope(g: GridFunction) -> GridFunction:
    """Greatest convex minorant of ``g`` sampled on the same grid.

    The hull is interpolated back onto the grid and clipped to
    ``[min(fs), fs]``, both of which bound the exact envelope.
    """
    hull = _lower_hull(g.us, g.fs)
    values = np.interp(g.us, g.us[hull], g.fs[hull])
    values = np.clip(values, np.min(g.fs), g.fs)
    return GridFunction(g.us, values)


def is_grid_convex(g: GridFunction, tolerance: float = 1e-12) -> bool:
    """Whether every interior value lies on or below the chord of its neighbours."""
    us, fs = g.us, g.fs
    if us.size < 3:
        return True
    left, mid, right = us[:-2], us[1:-1], us[2:]
    chord = (fs[:-2] * (right - mid) + fs[2:] * (mid - left)) / (right - left)
    return bool(np.all(fs[1:-1] <= chord + tolerance))


def _slice(f: Objective, x: np.ndarray, u_grid: np.ndarray) -> GridFunction:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    u_grid = np.asarray(u_grid, dtype=np.float64).reshape(-1)
    X = np.repeat(x[None, :], u_grid.size, axis=0)
    return GridFunction(u_grid, np.asarray(f(X, u_grid[:, None]), dtype=np.float64).reshape(-1))


def pgcm_slice_check(f: Objective, x: np.ndarray, u_grid: np.ndarray, tolerance: float = 0.0) -> SliceReport:
    """Compare the minimum and argmin of ``f(x, .)`` with those of its envelope."""
    g = _slice(f, x, u_grid)
    envelope = lower_convex_envelope(g)
    f_min = float(np.min(g.fs))
    envelope_min = float(np.min(envelope.fs))
    argmin_f = np.flatnonzero(g.fs == f_min)
    argmin_envelope = np.flatnonzero(envelope.fs == envelope_min)
    return SliceReport(
        f_min=f_min,
        envelope_min=envelope_min,
        argmin_f=argmin_f,
        argmin_envelope=argmin_envelope,
        minima_equal=abs(f_min - envelope_min) <= tolerance,
        argmin_included=bool(np.all(np.isin(argmin_f, argmin_envelope))),
    )


def pgcm_continuity_probe(
    f: Objective,
    x_pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    u_grid: np.ndarray,
    tolerance: float = 1e-12,
) -> ContinuityReport:
    """Sup-distance between envelope slices for each pair of nearby parameters.

    The trend check passes when distances do not increase as the separation
    shrinks (up to ``tolerance``).
    """
    separations, distances = [], []
    for x_a, x_b in x_pairs:
        env_a = lower_convex_envelope(_slice(f, x_a, u_grid))
        env_b = lower_convex_envelope(_slice(f, x_b, u_grid))
        separations.append(float(np.linalg.norm(np.atleast_1d(x_a) - np.atleast_1d(x_b))))
        distances.append(float(np.max(np.abs(env_a.fs - env_b.fs))))
    order = np.argsort(separations, kind="stable")[::-1]
    separations = np.asarray(separations)[order]
    distances = np.asarray(distances)[order]
    non_increasing = bool(np.all(np.diff(distances) <= tolerance))
    if not non_increasing:
        logger.warning(f"Envelope distances not monotone in separation: {distances.tolist()}")
    return ContinuityReport(separations, distances, non_increasing)
