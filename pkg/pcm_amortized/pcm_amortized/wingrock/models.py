"""Value types for the wing-rock NMPC problem."""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..numerics import ContractViolation
from ..solvers import Box


@dataclass(frozen=True)
class WingRockConsts:
    """Coefficients of ``phi'' + omega^2 phi = mu1 phi' + b1 phi^3 + mu2 phi^2 phi' + b2 phi phi'^2 + delta``.

    Attributes:
        omega: Natural frequency (rad/s)
        mu1: Linear damping coefficient
        mu2: Cubic damping coefficient
        b1: Cubic stiffness coefficient
        b2: Quadratic rate coupling coefficient
    """

    omega: float = 0.2
    mu1: float = 0.05
    mu2: float = -0.2
    b1: float = -0.02
    b2: float = 0.3

    def __post_init__(self) -> None:
        """Validate finiteness."""
        for name, value in self.as_dict().items():
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "omega": float(self.omega),
            "mu1": float(self.mu1),
            "mu2": float(self.mu2),
            "b1": float(self.b1),
            "b2": float(self.b2),
        }

    def equilibrium_input(self, phi: float) -> float:
        """Input holding the plant at rest at roll angle ``phi``."""
        return float(self.omega**2 * phi - self.b1 * phi**3)


def _check_psd(name: str, matrix: np.ndarray, strict: bool) -> None:
    if not np.allclose(matrix, matrix.T, atol=0.0):
        raise ValueError(f"{name} must be symmetric, got {matrix.tolist()}")
    smallest = float(np.min(np.linalg.eigvalsh(matrix)))
    if strict and not smallest > 0:
        raise ValueError(f"{name} must be positive definite, got eigenvalue {smallest}")
    if not strict and smallest < -1e-12:
        raise ValueError(f"{name} must be positive semidefinite, got eigenvalue {smallest}")


def _deg_box(lower: list[float], upper: list[float]) -> Box:
    return Box(np.deg2rad(lower), np.deg2rad(upper))


@dataclass(frozen=True)
class NmpcProblem:
    """Finite-horizon NMPC problem of the wing-rock plant.

    States are ``(phi, phi_dot)`` in rad and rad/s. The parameter of the
    learned objective is ``x = (x0, xd)`` and the decision variable is the
    input sequence ``u = (u_0, ..., u_{N-1})``.

    Attributes:
        horizon: Number of steps N
        dt: Sampling time (s)
        Q: Stage state weight (2x2, PSD)
        QN: Terminal state weight (2x2, PSD)
        R: Input weight (1x1, PD)
        input_box: Per-step input bounds
        state_box_x0: Initial-state sampling box
        setpoint_box: Setpoint sampling box
    """

    horizon: int = 5
    dt: float = 0.1
    Q: np.ndarray = field(default_factory=lambda: np.diag([1.0, 0.1]))
    QN: np.ndarray = field(default_factory=lambda: np.diag([1.0, 0.1]))
    R: np.ndarray = field(default_factory=lambda: np.array([[0.1]]))
    input_box: Box = field(default_factory=lambda: Box.uniform(-1.75, 1.75, 1))
    state_box_x0: Box = field(default_factory=lambda: _deg_box([-25.0, -50.0], [25.0, 50.0]))
    setpoint_box: Box = field(default_factory=lambda: _deg_box([-25.0, 0.0], [25.0, 0.0]))

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        for name, shape in (("Q", (2, 2)), ("QN", (2, 2)), ("R", (1, 1))):
            value = np.atleast_2d(np.asarray(getattr(self, name), dtype=np.float64))
            if value.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {value.shape}")
            object.__setattr__(self, name, value)
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        _check_psd("Q", self.Q, strict=False)
        _check_psd("QN", self.QN, strict=False)
        _check_psd("R", self.R, strict=True)
        if self.input_box.dim != 1:
            raise ContractViolation("input_box must be one-dimensional", {"dim": self.input_box.dim})
        if self.state_box_x0.dim != 2 or self.setpoint_box.dim != 2:
            raise ContractViolation("state and setpoint boxes must be two-dimensional")

    @property
    def u_box(self) -> Box:
        """Box of the whole input sequence."""
        return Box(
            np.repeat(self.input_box.lower, self.horizon),
            np.repeat(self.input_box.upper, self.horizon),
        )

    @property
    def x_box(self) -> Box:
        """Box of the parameter ``x = (x0, xd)``."""
        return Box(
            np.concatenate([self.state_box_x0.lower, self.setpoint_box.lower]),
            np.concatenate([self.state_box_x0.upper, self.setpoint_box.upper]),
        )


@dataclass(frozen=True)
class Trajectory:
    """Closed-loop trajectory.

    Attributes:
        times: Sample times ``(T + 1,)``
        states: States ``(T + 1, 2)`` in rad, rad/s
        inputs: Applied inputs ``(T,)``
        solve_seconds: Controller wall time per step ``(T,)``
    """

    times: np.ndarray
    states: np.ndarray
    inputs: np.ndarray
    solve_seconds: np.ndarray

    def __post_init__(self) -> None:
        """Check lengths."""
        steps = self.inputs.shape[0]
        if self.times.shape != (steps + 1,) or self.states.shape != (steps + 1, 2):
            raise ContractViolation(
                "trajectory lengths are inconsistent",
                {"times": self.times.shape, "states": self.states.shape, "inputs": self.inputs.shape},
            )
        if self.solve_seconds.shape != (steps,):
            raise ContractViolation("solve_seconds must have one entry per input")

    def terminal_errors(self, xd: np.ndarray) -> tuple[float, float]:
        """``|phi(tf) - phi_d|`` in degrees and ``|phi_dot(tf) - phi_dot_d|`` in deg/s."""
        error = np.abs(self.states[-1] - np.asarray(xd, dtype=np.float64))
        return float(np.rad2deg(error[0])), float(np.rad2deg(error[1]))

    def to_frame(self) -> pd.DataFrame:
        """Rows per sample time in degrees; the final row has no input."""
        return pd.DataFrame({
            "t_s": self.times,
            "phi_deg": np.rad2deg(self.states[:, 0]),
            "phidot_degps": np.rad2deg(self.states[:, 1]),
            "delta_g": np.append(self.inputs, np.nan),
            "solve_s": np.append(self.solve_seconds, np.nan),
        })
