"""Wing-rock dynamics and their zero-order-hold discretization.

All functions broadcast over leading batch axes: states ``(..., 2)``,
inputs ``(...)``.
"""

import logging
from typing import Optional

import numpy as np
from scipy import linalg

from .exceptions import PropagationError
from .models import WingRockConsts

logger = logging.getLogger(__name__)

RK4_SUBSTEPS = 10


def dynamics_deriv(state: np.ndarray, delta: np.ndarray, consts: WingRockConsts) -> np.ndarray:
    """Time derivative ``(phi_dot, phi_ddot)`` of the roll dynamics."""
    state = np.asarray(state, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    phi, rate = state[..., 0], state[..., 1]
    accel = (
        -(consts.omega**2) * phi
        + consts.mu1 * rate
        + consts.b1 * phi**3
        + consts.mu2 * phi**2 * rate
        + consts.b2 * phi * rate**2
        + delta
    )
    return np.stack([rate, accel], axis=-1)


def step_zoh(
    state: np.ndarray,
    delta: np.ndarray,
    dt: float,
    consts: WingRockConsts,
    substeps: int = RK4_SUBSTEPS,
    step: Optional[int] = None,
) -> np.ndarray:
    """Advance by ``dt`` with the input held constant (classical RK4).

    Raises:
        PropagationError: If the next state is not finite.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    state = np.asarray(state, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    h = dt / substeps
    for _ in range(substeps):
        k1 = dynamics_deriv(state, delta, consts)
        k2 = dynamics_deriv(state + 0.5 * h * k1, delta, consts)
        k3 = dynamics_deriv(state + 0.5 * h * k2, delta, consts)
        k4 = dynamics_deriv(state + h * k3, delta, consts)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(state)):
        raise PropagationError(step)
    return state


def linearize_at_origin(consts: WingRockConsts) -> tuple[np.ndarray, np.ndarray]:
    """Continuous-time ``(A, B)`` of the dynamics linearized at the origin."""
    A = np.array([[0.0, 1.0], [-(consts.omega**2), consts.mu1]])
    B = np.array([[0.0], [1.0]])
    return A, B


def zoh_discretize(A: np.ndarray, B: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact zero-order-hold discretization via the augmented matrix exponential."""
    n, m = B.shape
    augmented = np.zeros((n + m, n + m))
    augmented[:n, :n] = A
    augmented[:n, n:] = B
    exponential = linalg.expm(augmented * dt)
    return exponential[:n, :n], exponential[:n, n:]
