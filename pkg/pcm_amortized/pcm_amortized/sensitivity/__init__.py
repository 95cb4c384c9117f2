"""Sensitivity of the PCM minimizer to the PCM parameters."""

from .implicit import minimizer_vjp, minimizer_vjp_batch
from .models import GradientMode, MinimizerAdjoint, MinimizerSensitivity

__all__ = [
    "minimizer_vjp",
    "minimizer_vjp_batch",
    "GradientMode",
    "MinimizerAdjoint",
    "MinimizerSensitivity",
]
