"""Test-split metrics, the suboptimality bound check and surface samples."""

import logging
import time
from typing import Callable

import numpy as np
import pandas as pd

from ..solvers import SolveResult, SolverError
from .exceptions import EmptySplitError
from .models import BoundReport, Metrics, ObjectiveMetrics
from .surrogates import Surrogate

logger = logging.getLogger(__name__)

# Oracle returning the true minimizer set ``(K, m)`` (or one ``(m,)`` point) and minimum value at x.
MinOracle = Callable[[np.ndarray], tuple[np.ndarray, float]]
# Batched true objective ``(X (B, n), U (B, m)) -> (B,)``.
Objective = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _timed_minimize(surrogate: Surrogate, x: np.ndarray) -> tuple[SolveResult, float]:
    started = time.perf_counter()
    result = surrogate.minimize(x)
    return result, time.perf_counter() - started


def _usable(result: SolveResult) -> bool:
    return bool(result.converged and np.isfinite(result.value) and np.all(np.isfinite(result.minimizer)))


def _minimize_all(surrogate: Surrogate, X: np.ndarray) -> list[tuple[int, SolveResult, float]]:
    """Solve at every x; failed solves are logged and left out."""
    solved = []
    for index, x in enumerate(X):
        try:
            result, seconds = _timed_minimize(surrogate, x)
        except SolverError as e:
            logger.warning(f"Excluding sample {index}: {e}")
            continue
        if not _usable(result):
            logger.warning(f"Excluding sample {index}: solve did not converge after {result.iterations} iterations")
            continue
        solved.append((index, result, seconds))
    return solved


def evaluate_metrics(
    surrogate: Surrogate,
    X_test: np.ndarray,
    true_min_oracle: MinOracle,
) -> Metrics:
    """Mean minimizer error, minimum-value error and solve time over ``X_test``.

    The minimizer error is the l2 distance to the nearest point of the true
    minimizer set; the value error is ``|f_hat(x, u_hat) - f*(x)|``. The
    oracle supplies both the minimizer set and ``f*(x)``, so the true
    objective itself is never evaluated here; callers build the oracle from
    it (see ``case1_min_oracle``).

    Raises:
        EmptySplitError: If no test sample could be solved.
    """
    X_test = np.asarray(X_test, dtype=np.float64)
    X_test = X_test.reshape(-1, 1) if X_test.ndim == 1 else X_test
    solved = _minimize_all(surrogate, X_test)
    excluded = X_test.shape[0] - len(solved)
    if not solved:
        raise EmptySplitError("test", "No test sample could be solved")

    minimizer_errs, value_errs, seconds = [], [], []
    for index, result, elapsed in solved:
        x = X_test[index]
        true_minimizers, true_value = true_min_oracle(x)
        true_minimizers = np.asarray(true_minimizers, dtype=np.float64).reshape(-1, result.minimizer.size)
        predicted = float(surrogate.predict(x[None, :], result.minimizer[None, :])[0])
        minimizer_errs.append(float(np.min(np.linalg.norm(true_minimizers - result.minimizer, axis=1))))
        value_errs.append(abs(predicted - float(true_value)))
        seconds.append(elapsed)

    if excluded:
        logger.warning(f"{excluded} of {X_test.shape[0]} test samples excluded from {surrogate.kind.value} metrics")
    return Metrics(
        mean_minimizer_err=float(np.mean(minimizer_errs)),
        mean_minvalue_err=float(np.mean(value_errs)),
        mean_solve_seconds=float(np.mean(seconds)),
        excluded_samples=excluded,
    )


def evaluate_objective_metrics(
    surrogate: Surrogate,
    X_test: np.ndarray,
    true_objective: Objective,
) -> ObjectiveMetrics:
    """Mean true objective at the predicted minimizers and mean solve time."""
    X_test = np.asarray(X_test, dtype=np.float64)
    X_test = X_test.reshape(-1, 1) if X_test.ndim == 1 else X_test
    solved = _minimize_all(surrogate, X_test)
    if not solved:
        raise EmptySplitError("test", "No test sample could be solved")
    X = X_test[[index for index, _, _ in solved]]
    U = np.stack([result.minimizer for _, result, _ in solved])
    values = np.asarray(true_objective(X, U), dtype=np.float64)
    return ObjectiveMetrics(
        mean_objective=float(np.mean(values)),
        mean_solve_seconds=float(np.mean([seconds for _, _, seconds in solved])),
        excluded_samples=X_test.shape[0] - len(solved),
    )


def suboptimality_bound_check(
    surrogate: Surrogate,
    true_objective: Objective,
    x_grid: np.ndarray,
    u_grid: np.ndarray,
    grid_tolerance: float = 1e-3,
) -> BoundReport:
    """Check ``f(x, u_hat(x)) <= 2 * eps_hat + min_grid f(x, .) + grid_tolerance``.

    ``eps_hat`` is the largest ``|f_hat - f|`` over all ``(x, u)`` grid pairs.
    """
    x_grid = np.asarray(x_grid, dtype=np.float64)
    x_grid = x_grid.reshape(-1, 1) if x_grid.ndim == 1 else x_grid
    u_grid = np.asarray(u_grid, dtype=np.float64)
    u_grid = u_grid.reshape(-1, 1) if u_grid.ndim == 1 else u_grid

    epsilon = 0.0
    suboptimality = np.empty(x_grid.shape[0])
    for k, x in enumerate(x_grid):
        X = np.repeat(x[None, :], u_grid.shape[0], axis=0)
        true_values = np.asarray(true_objective(X, u_grid), dtype=np.float64)
        predicted = surrogate.predict(X, u_grid)
        epsilon = max(epsilon, float(np.max(np.abs(predicted - true_values))))
        u_hat = surrogate.minimize(x).minimizer
        at_u_hat = float(np.asarray(true_objective(x[None, :], u_hat[None, :])).reshape(-1)[0])
        suboptimality[k] = at_u_hat - float(np.min(true_values))

    passed = bool(np.all(suboptimality <= 2.0 * epsilon + grid_tolerance))
    report = BoundReport(epsilon, suboptimality, grid_tolerance, passed)
    logger.info(
        f"Suboptimality bound: eps_hat {epsilon:.6g}, max suboptimality {report.max_suboptimality:.6g}, "
        f"passed={passed}"
    )
    return report


def surface_grid(surrogate: Surrogate, x_grid: np.ndarray, u_grid: np.ndarray) -> pd.DataFrame:
    """``f_hat`` on the product of 1D grids, as columns ``x, u, f_hat``."""
    xs, us = np.meshgrid(np.asarray(x_grid, dtype=np.float64), np.asarray(u_grid, dtype=np.float64), indexing="ij")
    xs, us = xs.reshape(-1), us.reshape(-1)
    values = surrogate.predict(xs[:, None], us[:, None])
    return pd.DataFrame({"x": xs, "u": us, "f_hat": np.asarray(values, dtype=np.float64)})
