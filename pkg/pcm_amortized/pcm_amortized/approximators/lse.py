"""Max-affine, log-sum-exp and difference-of-LSE networks."""

import numpy as np

from ..numerics import ContractViolation, logsumexp, softmax_weights
from .models import AffineTerm, DlseNet, LseNet, MaNet


def _check_dim(z: np.ndarray, dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != dim:
        raise ContractViolation("input dimension mismatch", {"input": z.shape, "expected": dim})
    return z


def ma_eval(net: MaNet, z: np.ndarray) -> np.ndarray:
    """``max_i <a_i, z> + b_i`` for one point or a batch ``(B, d)``."""
    z = _check_dim(z, net.dim)
    slopes, offsets = net.stacked()
    return np.max(z @ slopes.T + offsets, axis=-1)


def lse_forward(net: LseNet, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched LSE evaluation.

    Returns:
        values ``(B,)``, gradients ``(B, d)`` and softmax weights ``(B, I)``
        (unbatched shapes for a single point).
    """
    z = _check_dim(z, net.dim)
    slopes, offsets = net.stacked()
    scores = z @ slopes.T + offsets
    values = logsumexp(scores, net.temperature)
    weights = softmax_weights(scores, net.temperature)
    return values, weights @ slopes, weights


def lse_eval(net: LseNet, z: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and gradient in ``z`` of an LSE network at one point."""
    value, grad, _ = lse_forward(net, np.asarray(z, dtype=np.float64).reshape(-1))
    return float(value), grad


def lse_param_grad(net: LseNet, z: np.ndarray, upstream: np.ndarray) -> LseNet:
    """Gradient of ``sum_b upstream_b * lse(z_b)`` with respect to all a_i, b_i."""
    z = np.atleast_2d(_check_dim(z, net.dim))
    _, _, weights = lse_forward(net, z)
    scaled = weights * np.asarray(upstream, dtype=np.float64).reshape(-1, 1)
    slope_grads = scaled.T @ z
    offset_grads = scaled.sum(axis=0)
    terms = tuple(AffineTerm(a, b) for a, b in zip(slope_grads, offset_grads))
    return LseNet(terms, net.temperature)


def dlse_forward(net: DlseNet, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched DLSE value ``lse_pos - lse_neg`` and gradient in ``z``."""
    pos_value, pos_grad, _ = lse_forward(net.lse_pos, z)
    neg_value, neg_grad, _ = lse_forward(net.lse_neg, z)
    return pos_value - neg_value, pos_grad - neg_grad


def dlse_eval(net: DlseNet, z: np.ndarray) -> tuple[float, np.ndarray]:
    """Value and gradient in ``z`` of a DLSE network at one point."""
    value, grad = dlse_forward(net, np.asarray(z, dtype=np.float64).reshape(-1))
    return float(value), grad


def dlse_param_grad(net: DlseNet, z: np.ndarray, upstream: np.ndarray) -> DlseNet:
    """Gradient of ``sum_b upstream_b * dlse(z_b)`` with respect to both components."""
    upstream = np.asarray(upstream, dtype=np.float64)
    return DlseNet(
        lse_param_grad(net.lse_pos, z, upstream),
        lse_param_grad(net.lse_neg, z, -upstream),
    )


def lse_hessian(slopes: np.ndarray, weights: np.ndarray, temperature: float) -> np.ndarray:
    """Softmax-covariance Hessian ``(1/T)(sum p_i a_i a_i^T - g g^T)``.

    Args:
        slopes: ``(..., I, m)`` slope vectors
        weights: ``(..., I)`` softmax weights
        temperature: Temperature T

    Returns:
        Symmetric PSD matrices ``(..., m, m)``.
    """
    mean = np.einsum("...i,...im->...m", weights, slopes)
    second = np.einsum("...i,...im,...in->...mn", weights, slopes, slopes)
    hessian = (second - mean[..., :, None] * mean[..., None, :]) / temperature
    return 0.5 * (hessian + np.swapaxes(hessian, -1, -2))
