"""Value types for minimizer sensitivities."""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class GradientMode(str, Enum):
    """How gradients flow through the PCM minimizer.

    Attributes:
        IMPLICIT: Implicit-function-theorem VJP on the free coordinates
        DETACHED: Stop-gradient; the minimizer is treated as a constant
    """

    IMPLICIT = "implicit"
    DETACHED = "detached"


@dataclass(frozen=True)
class MinimizerSensitivity:
    """Linearization data of one minimizer.

    Attributes:
        active_mask: Coordinates clamped at a box bound (zero sensitivity)
        hessian_uu: Analytic Hessian of the PCM in u at the minimizer
        mode: Gradient mode used
        damped: Whether the Tikhonov fallback was needed for the solve
    """

    active_mask: np.ndarray
    hessian_uu: np.ndarray
    mode: GradientMode
    damped: bool = False


@dataclass(frozen=True)
class MinimizerAdjoint:
    """Adjoints of the PCM coefficients for a batch of minimizers.

    ``slope_grads (B, I, m)`` and ``offset_grads (B, I)`` are the gradients of
    ``sum_b <upstream_b, u*_b>`` with respect to the slopes and offsets; they
    go through :func:`plse_backward` like any other coefficient adjoint.
    """

    slope_grads: np.ndarray
    offset_grads: np.ndarray
    sensitivities: tuple[MinimizerSensitivity, ...]

    @property
    def damped_count(self) -> int:
        return sum(1 for s in self.sensitivities if s.damped)
