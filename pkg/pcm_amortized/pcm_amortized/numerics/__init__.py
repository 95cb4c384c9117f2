"""Deterministic numeric kernels shared by every other package."""

from .adam import AdamState, adam_step
from .exceptions import ContractViolation, NumericDomainError, NumericsError
from .kernels import (
    finite_diff_grad,
    finite_diff_jacobian,
    logsumexp,
    relative_error,
    softmax_weights,
)
from .rng import RngSeed

__all__ = [
    "AdamState",
    "adam_step",
    "ContractViolation",
    "NumericDomainError",
    "NumericsError",
    "finite_diff_grad",
    "finite_diff_jacobian",
    "logsumexp",
    "relative_error",
    "softmax_weights",
    "RngSeed",
]
