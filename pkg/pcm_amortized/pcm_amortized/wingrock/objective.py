"""Finite-horizon NMPC objective of the wing-rock plant."""

import numpy as np

from ..numerics import ContractViolation
from .dynamics import step_zoh
from .models import NmpcProblem, WingRockConsts


def rollout(
    x0: np.ndarray,
    u_seq: np.ndarray,
    problem: NmpcProblem,
    consts: WingRockConsts,
) -> np.ndarray:
    """States ``(B, N + 1, 2)`` from ``x0 (B, 2)`` under ``u_seq (B, N)``."""
    x0 = np.atleast_2d(np.asarray(x0, dtype=np.float64))
    u_seq = np.atleast_2d(np.asarray(u_seq, dtype=np.float64))
    if u_seq.shape[1] != problem.horizon or u_seq.shape[0] != x0.shape[0]:
        raise ContractViolation(
            "input sequences must be (batch, horizon)",
            {"u_seq": u_seq.shape, "x0": x0.shape, "horizon": problem.horizon},
        )
    states = np.empty((x0.shape[0], problem.horizon + 1, 2))
    states[:, 0] = x0
    for n in range(problem.horizon):
        states[:, n + 1] = step_zoh(states[:, n], u_seq[:, n], problem.dt, consts, step=n)
    return states


def _quadratic(errors: np.ndarray, weight: np.ndarray) -> np.ndarray:
    return np.einsum("...i,ij,...j->...", errors, weight, errors)


def nmpc_objective(
    x0: np.ndarray,
    xd: np.ndarray,
    u_seq: np.ndarray,
    problem: NmpcProblem,
    consts: WingRockConsts,
):
    """``sum_n (x_n - xd)' Q (x_n - xd) + R u_n^2`` plus the terminal cost.

    Batched over leading axes of ``x0``, ``xd`` (``(B, 2)``) and ``u_seq``
    (``(B, N)``); a single instance returns a float.
    """
    single = np.ndim(u_seq) == 1
    x0 = np.atleast_2d(np.asarray(x0, dtype=np.float64))
    xd = np.atleast_2d(np.asarray(xd, dtype=np.float64))
    u_seq = np.atleast_2d(np.asarray(u_seq, dtype=np.float64))
    states = rollout(x0, u_seq, problem, consts)
    errors = states - xd[:, None, :]
    stage = _quadratic(errors[:, :-1], problem.Q).sum(axis=1)
    inputs = problem.R[0, 0] * np.sum(u_seq * u_seq, axis=1)
    terminal = _quadratic(errors[:, -1], problem.QN)
    total = stage + inputs + terminal
    return float(total[0]) if single else total


def nmpc_objective_xu(
    X: np.ndarray,
    U: np.ndarray,
    problem: NmpcProblem,
    consts: WingRockConsts,
) -> np.ndarray:
    """Objective on the learning parameterization ``x = (x0, xd)``, ``u = u_seq``."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    return nmpc_objective(X[:, :2], X[:, 2:], np.atleast_2d(U), problem, consts)
