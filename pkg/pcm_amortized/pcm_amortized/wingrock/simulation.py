"""Closed-loop receding-horizon simulation."""

import logging
import time
from typing import Callable

import numpy as np

from .dynamics import step_zoh
from .exceptions import InputConstraintViolation
from .models import NmpcProblem, Trajectory, WingRockConsts

logger = logging.getLogger(__name__)

# Maps the parameter ``x = (x0, xd)`` to an input sequence of length N.
Controller = Callable[[np.ndarray], np.ndarray]


def closed_loop_sim(
    controller: Controller,
    x0: np.ndarray,
    xd: np.ndarray,
    tf: float,
    problem: NmpcProblem,
    consts: WingRockConsts,
) -> Trajectory:
    """Apply the first input of each controller answer and advance the plant.

    Raises:
        ValueError: If ``tf`` is not a multiple of ``dt``.
        InputConstraintViolation: If the controller leaves the input box.
        PropagationError: If the state becomes non-finite.
    """
    steps = int(round(tf / problem.dt))
    if steps < 1 or abs(steps * problem.dt - tf) > 1e-9:
        raise ValueError(f"tf must be a positive multiple of dt={problem.dt}, got {tf}")
    lower = float(problem.input_box.lower[0])
    upper = float(problem.input_box.upper[0])
    xd = np.asarray(xd, dtype=np.float64)

    states = np.empty((steps + 1, 2))
    states[0] = np.asarray(x0, dtype=np.float64)
    inputs = np.empty(steps)
    solve_seconds = np.empty(steps)
    for k in range(steps):
        started = time.perf_counter()
        u_seq = np.asarray(controller(np.concatenate([states[k], xd])), dtype=np.float64).reshape(-1)
        solve_seconds[k] = time.perf_counter() - started
        delta = float(u_seq[0])
        if not (lower <= delta <= upper):
            raise InputConstraintViolation(k * problem.dt, delta, lower, upper)
        inputs[k] = delta
        states[k + 1] = step_zoh(states[k], delta, problem.dt, consts, step=k)

    trajectory = Trajectory(np.arange(steps + 1) * problem.dt, states, inputs, solve_seconds)
    phi_err, rate_err = trajectory.terminal_errors(xd)
    logger.info(f"Closed loop over {tf}s: terminal errors {phi_err:.4f} deg, {rate_err:.4f} deg/s")
    return trajectory


def surrogate_controller(surrogate) -> Controller:
    """Controller answering with the surrogate's minimizer at ``x``."""

    def control(x: np.ndarray) -> np.ndarray:
        result = surrogate.minimize(x)
        if not result.converged:
            logger.warning(f"{surrogate.kind.value} controller solve did not converge; using last iterate")
        return result.minimizer

    return control
