"""Linear MPC baseline built on the linearization at the origin.

Predictions use deviation states ``x - xd`` propagated by the ZOH linear
model, with the input measured against the equilibrium input of ``xd``.
The resulting box-constrained QP is solved by the projected Newton core.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..solvers import SolverOpts, projected_newton
from .dynamics import linearize_at_origin, zoh_discretize
from .models import NmpcProblem, WingRockConsts
from .simulation import Controller

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticObjective:
    """``0.5 u' H u + q_b' u`` for each batch row ``b``."""

    hessian: np.ndarray
    linear: np.ndarray

    def value(self, points: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return 0.5 * np.einsum("bi,ij,bj->b", points, self.hessian, points) + np.sum(
            self.linear[rows] * points, axis=1
        )

    def derivatives(self, points: np.ndarray, rows: np.ndarray):
        grads = points @ self.hessian + self.linear[rows]
        hessians = np.broadcast_to(self.hessian, (points.shape[0],) + self.hessian.shape)
        return self.value(points, rows), grads, hessians


@dataclass(frozen=True)
class LinearPrediction:
    """Stacked prediction ``dX = Phi dx0 + Gamma (u - u_eq)`` over steps 1..N."""

    phi: np.ndarray
    gamma: np.ndarray
    weight: np.ndarray


def stacked_prediction(problem: NmpcProblem, consts: WingRockConsts) -> LinearPrediction:
    A, B = zoh_discretize(*linearize_at_origin(consts), problem.dt)
    N = problem.horizon
    phi = np.zeros((2 * N, 2))
    gamma = np.zeros((2 * N, N))
    power = np.eye(2)
    for k in range(N):
        power = A @ power
        phi[2 * k : 2 * k + 2] = power
        for j in range(k + 1):
            gamma[2 * k : 2 * k + 2, j] = (np.linalg.matrix_power(A, k - j) @ B)[:, 0]
    weight = np.zeros((2 * N, 2 * N))
    for k in range(N):
        weight[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = problem.QN if k == N - 1 else problem.Q
    return LinearPrediction(phi, gamma, weight)


def linear_mpc_qp(
    x: np.ndarray,
    problem: NmpcProblem,
    consts: WingRockConsts,
    prediction: Optional[LinearPrediction] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Hessian ``H`` and linear term ``q`` of the linear-MPC QP at ``x = (x0, xd)``."""
    prediction = prediction or stacked_prediction(problem, consts)
    x = np.asarray(x, dtype=np.float64)
    x0, xd = x[:2], x[2:]
    u_eq = consts.equilibrium_input(float(xd[0]))
    free_response = prediction.phi @ (x0 - xd) - prediction.gamma @ np.full(problem.horizon, u_eq)
    gamma_weighted = prediction.gamma.T @ prediction.weight
    hessian = 2.0 * (gamma_weighted @ prediction.gamma + problem.R[0, 0] * np.eye(problem.horizon))
    linear = 2.0 * gamma_weighted @ free_response
    return 0.5 * (hessian + hessian.T), linear


def linear_mpc_baseline(
    problem: NmpcProblem,
    consts: WingRockConsts,
    opts: Optional[SolverOpts] = None,
) -> Controller:
    """Controller minimizing the linear-MPC QP over the input box."""
    opts = opts or SolverOpts()
    prediction = stacked_prediction(problem, consts)
    box = problem.u_box

    def control(x: np.ndarray) -> np.ndarray:
        hessian, linear = linear_mpc_qp(x, problem, consts, prediction)
        result = projected_newton(QuadraticObjective(hessian, linear[None, :]), box, opts, box.center[None, :])
        if not result.converged[0]:
            logger.warning("Linear MPC QP did not converge; using last iterate")
        return result.minimizers[0]

    return control
