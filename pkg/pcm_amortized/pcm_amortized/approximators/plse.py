"""Parameterized LSE (PLSE / PLSE+) networks.

The subnetworks turn a parameter batch ``X (B, n)`` into slopes
``A (B, I, m)`` and offsets ``c (B, I)``; for fixed ``x`` the network is an
ordinary LSE in ``u`` with those coefficients, which is what the convex
solver consumes.
"""

from dataclasses import dataclass

import numpy as np

from ..numerics import ContractViolation, logsumexp, softmax_weights
from .fnn import FnnCache, fnn_backward, fnn_forward
from .models import PlseNet


@dataclass(frozen=True)
class PlseCache:
    """Subnetwork caches from :func:`plse_affine`."""

    a_caches: tuple[FnnCache, ...]
    b_caches: tuple[FnnCache, ...]


@dataclass(frozen=True)
class PlseForward:
    """Batched PLSE evaluation results."""

    values: np.ndarray
    grad_u: np.ndarray
    weights: np.ndarray
    slopes: np.ndarray
    offsets: np.ndarray
    cache: PlseCache


def _as_batch(values: np.ndarray, dim: int, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    batch = values.reshape(1, -1) if values.ndim <= 1 else values
    if batch.shape[1] != dim:
        raise ContractViolation(f"{name} dimension mismatch", {name: values.shape, "expected": dim})
    return batch


def plse_affine(net: PlseNet, X: np.ndarray) -> tuple[np.ndarray, np.ndarray, PlseCache]:
    """Slopes ``(B, I, m)`` and offsets ``(B, I)`` at a parameter batch."""
    X = _as_batch(X, net.x_dim, "x")
    batch = X.shape[0]
    slopes = np.zeros((batch, net.num_terms, net.u_dim))
    offsets = np.empty((batch, net.num_terms))
    first = 1 if net.plus_constrained else 0
    a_caches, b_caches = [], []
    for j, subnet in enumerate(net.a_subnets):
        out, cache = fnn_forward(subnet, X)
        slopes[:, first + j, :] = out
        a_caches.append(cache)
    for i, subnet in enumerate(net.b_subnets):
        out, cache = fnn_forward(subnet, X)
        offsets[:, i] = out[:, 0]
        b_caches.append(cache)
    return slopes, offsets, PlseCache(tuple(a_caches), tuple(b_caches))


def plse_forward(net: PlseNet, X: np.ndarray, U: np.ndarray) -> PlseForward:
    """Evaluate the network on batches ``X (B, n)``, ``U (B, m)``."""
    U = _as_batch(U, net.u_dim, "u")
    slopes, offsets, cache = plse_affine(net, X)
    if slopes.shape[0] != U.shape[0]:
        raise ContractViolation("x and u batches differ in length", {"x": slopes.shape[0], "u": U.shape[0]})
    scores = np.einsum("bim,bm->bi", slopes, U) + offsets
    values = logsumexp(scores, net.temperature)
    weights = softmax_weights(scores, net.temperature)
    grad_u = np.einsum("bi,bim->bm", weights, slopes)
    return PlseForward(values, grad_u, weights, slopes, offsets, cache)


def plse_backward(
    net: PlseNet,
    cache: PlseCache,
    slope_grads: np.ndarray,
    offset_grads: np.ndarray,
) -> PlseNet:
    """Backpropagate slope/offset adjoints through the subnetworks.

    Args:
        net: Network used in the forward pass
        cache: Cache from :func:`plse_affine`
        slope_grads: ``dL/dA`` of shape ``(B, I, m)``; the first term's entries
            are ignored for PLSE+ since no parameters produce them
        offset_grads: ``dL/dc`` of shape ``(B, I)``

    Returns:
        Parameter gradient as a :class:`PlseNet`.
    """
    first = 1 if net.plus_constrained else 0
    a_grads = []
    for j, (subnet, sub_cache) in enumerate(zip(net.a_subnets, cache.a_caches)):
        _, grad = fnn_backward(subnet, sub_cache, slope_grads[:, first + j, :])
        a_grads.append(grad)
    b_grads = []
    for i, (subnet, sub_cache) in enumerate(zip(net.b_subnets, cache.b_caches)):
        _, grad = fnn_backward(subnet, sub_cache, offset_grads[:, i : i + 1])
        b_grads.append(grad)
    return PlseNet(tuple(a_grads), tuple(b_grads), net.temperature, net.plus_constrained, net.u_dim)


def plse_value_backward(net: PlseNet, forward: PlseForward, U: np.ndarray, upstream: np.ndarray) -> PlseNet:
    """Parameter gradient of ``sum_b upstream_b * plse(x_b, u_b)``."""
    U = _as_batch(U, net.u_dim, "u")
    scaled = forward.weights * np.asarray(upstream, dtype=np.float64).reshape(-1, 1)
    slope_grads = scaled[:, :, None] * U[:, None, :]
    return plse_backward(net, forward.cache, slope_grads, scaled)


def plse_eval(net: PlseNet, x: np.ndarray, u: np.ndarray) -> tuple[float, np.ndarray, PlseNet]:
    """Value, gradient in ``u`` and parameter gradient at a single ``(x, u)``."""
    forward = plse_forward(net, x, u)
    grads_theta = plse_value_backward(net, forward, u, np.ones(1))
    return float(forward.values[0]), forward.grad_u[0], grads_theta
