"""Stable log-sum-exp, softmax weights and finite-difference oracles."""

from typing import Callable

import numpy as np
from scipy import special

from .exceptions import NumericDomainError


def _check_lse_inputs(values: np.ndarray, temperature: float) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0 or values.shape[-1] == 0:
        raise NumericDomainError("values must be nonempty", {"shape": values.shape})
    if not temperature > 0:
        raise NumericDomainError(
            f"temperature must be > 0, got {temperature}",
            {"temperature": temperature},
        )
    return values


def logsumexp(values: np.ndarray, temperature: float) -> np.ndarray:
    """Temperature-scaled log-sum-exp ``T * log(sum(exp(v / T)))``.

    The maximum is shifted out before exponentiating, so the result is exact
    for a single element and never overflows. Reduces over the last axis;
    a 1D input returns a scalar.

    Args:
        values: Array whose last axis is reduced
        temperature: Positive temperature T

    Returns:
        Reduced value(s); always within ``[max(v), max(v) + T*log(len)]``.

    Raises:
        NumericDomainError: On empty input or nonpositive temperature.
    """
    values = _check_lse_inputs(values, temperature)
    shift = np.max(values, axis=-1)
    scaled = (values - np.expand_dims(shift, -1)) / temperature
    # The log term is >= 0 because the shifted maximum contributes exp(0).
    return shift + temperature * special.logsumexp(scaled, axis=-1)


def softmax_weights(values: np.ndarray, temperature: float) -> np.ndarray:
    """Softmax weights ``p_i = exp(v_i/T) / sum_j exp(v_j/T)`` over the last axis.

    These are the gradient of :func:`logsumexp` with respect to ``values``.
    """
    values = _check_lse_inputs(values, temperature)
    return special.softmax(values / temperature, axis=-1)


def finite_diff_grad(
    f: Callable[[np.ndarray], float],
    point: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Central-difference gradient of a real-valued function.

    Args:
        f: Function of a vector returning a real number
        point: Evaluation point (scalars are promoted to length-1 vectors)
        h: Step size

    Returns:
        Vector of ``(f(x + h e_i) - f(x - h e_i)) / (2h)``.
    """
    point = np.atleast_1d(np.asarray(point, dtype=np.float64))
    grad = np.empty(point.size)
    flat = point.reshape(-1)
    for i in range(flat.size):
        step = np.zeros_like(flat)
        step[i] = h
        forward = float(f((flat + step).reshape(point.shape)))
        backward = float(f((flat - step).reshape(point.shape)))
        grad[i] = (forward - backward) / (2.0 * h)
    return grad.reshape(point.shape)


def finite_diff_jacobian(
    f: Callable[[np.ndarray], np.ndarray],
    point: np.ndarray,
    h: float = 1e-5,
) -> np.ndarray:
    """Central-difference Jacobian of a vector-valued function.

    Returns an array of shape ``(out_dim, point.size)``.
    """
    point = np.atleast_1d(np.asarray(point, dtype=np.float64)).reshape(-1)
    columns = []
    for i in range(point.size):
        step = np.zeros_like(point)
        step[i] = h
        forward = np.atleast_1d(np.asarray(f(point + step), dtype=np.float64))
        backward = np.atleast_1d(np.asarray(f(point - step), dtype=np.float64))
        columns.append((forward - backward) / (2.0 * h))
    return np.stack(columns, axis=-1)


def relative_error(analytic: np.ndarray, reference: np.ndarray, floor: float = 1e-8) -> float:
    """Norm-wise relative error ``|a - b| / max(|a|, |b|, floor)``."""
    analytic = np.asarray(analytic, dtype=np.float64).reshape(-1)
    reference = np.asarray(reference, dtype=np.float64).reshape(-1)
    scale = max(np.linalg.norm(analytic), np.linalg.norm(reference), floor)
    return float(np.linalg.norm(analytic - reference) / scale)
