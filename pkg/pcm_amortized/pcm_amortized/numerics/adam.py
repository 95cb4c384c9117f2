"""Adam optimizer as a pure function of (params, grads, state, lr)."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractViolation

BETA1 = 0.9
BETA2 = 0.999
EPSILON = 1e-8


@dataclass(frozen=True)
class AdamState:
    """Optimizer moments for one flat parameter vector.

    Attributes:
        first_moment: Exponential average of gradients
        second_moment: Exponential average of squared gradients
        step_count: Number of updates applied so far
    """

    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0

    def __post_init__(self) -> None:
        """Validate state after initialization."""
        if self.first_moment.shape != self.second_moment.shape:
            raise ContractViolation(
                "moment shapes differ",
                {"first": self.first_moment.shape, "second": self.second_moment.shape},
            )
        if self.step_count < 0:
            raise ValueError(f"step_count must be >= 0, got {self.step_count}")

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        """Zero-initialized state for a parameter vector of ``size`` entries."""
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(
    params: np.ndarray,
    grads: np.ndarray,
    state: AdamState,
    lr: float,
) -> tuple[np.ndarray, AdamState]:
    """Apply one Adam update and return new parameters and state.

    Inputs are never mutated.

    Raises:
        ContractViolation: If shapes of params, grads and state disagree.
    """
    if not lr > 0:
        raise ValueError(f"lr must be > 0, got {lr}")
    params = np.asarray(params, dtype=np.float64)
    grads = np.asarray(grads, dtype=np.float64)
    if params.shape != grads.shape or params.shape != state.first_moment.shape:
        raise ContractViolation(
            "params, grads and optimizer state must share a shape",
            {
                "params": params.shape,
                "grads": grads.shape,
                "state": state.first_moment.shape,
            },
        )

    step = state.step_count + 1
    first = BETA1 * state.first_moment + (1.0 - BETA1) * grads
    second = BETA2 * state.second_moment + (1.0 - BETA2) * (grads * grads)
    first_hat = first / (1.0 - BETA1**step)
    second_hat = second / (1.0 - BETA2**step)
    new_params = params - lr * first_hat / (np.sqrt(second_hat) + EPSILON)
    return new_params, AdamState(first, second, step)
