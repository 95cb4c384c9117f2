"""Vector-Jacobian products of the PCM minimizer with respect to the PCM parameters.

At a minimizer with free coordinates F, stationarity ``grad_u f = 0`` on F
gives ``du*/dtheta = -H_FF^{-1} d(grad_u f)_F / dtheta``. For slopes ``A_i``
and offsets ``c_i`` of the LSE in u, with ``w = H_FF^{-1} v`` (zero off F),
``q_i = <w, A_i>`` and softmax weights ``p``:

    d<v, u*>/dA_j = -(p_j w + p_j (q_j - sum_i p_i q_i) u* / T)
    d<v, u*>/dc_j = -p_j (q_j - sum_i p_i q_i) / T
"""

import logging
from typing import Optional, Union

import numpy as np

from ..approximators import (
    PlseNet,
    flatten_parameters,
    lse_hessian,
    plse_affine,
    plse_backward,
    unflatten_parameters,
)
from ..numerics import ContractViolation, softmax_weights
from ..solvers import Box, SolveResult, clamped_coordinates
from .models import GradientMode, MinimizerAdjoint, MinimizerSensitivity

logger = logging.getLogger(__name__)

ACTIVE_MARGIN = 1e-9
CONDITION_LIMIT = 1e12
TIKHONOV = 1e-8


def _solve_free_block(hessian: np.ndarray, rhs: np.ndarray, free: np.ndarray) -> tuple[np.ndarray, bool]:
    w = np.zeros_like(rhs)
    if not np.any(free):
        return w, False
    block = hessian[np.ix_(free, free)]
    damped = not np.linalg.cond(block) <= CONDITION_LIMIT
    if damped:
        block = block + TIKHONOV * np.eye(block.shape[0])
    w[free] = np.linalg.solve(block, rhs[free])
    return w, damped


def minimizer_vjp_batch(
    slopes: np.ndarray,
    offsets: np.ndarray,
    temperature: float,
    minimizers: np.ndarray,
    upstream: np.ndarray,
    box: Box,
    mode: Union[GradientMode, str] = GradientMode.IMPLICIT,
    converged: Optional[np.ndarray] = None,
) -> MinimizerAdjoint:
    """Coefficient adjoints of ``sum_b <upstream_b, u*_b>``.

    Args:
        slopes: ``(B, I, m)`` slopes at each sample's x
        offsets: ``(B, I)`` offsets
        temperature: LSE temperature
        minimizers: ``(B, m)`` minimizers returned by the convex solver
        upstream: ``(B, m)`` upstream gradients with respect to the minimizers
        box: Box the minimizers were computed over
        mode: Implicit or detached (all-zero adjoints)
        converged: Optional per-row convergence flags; unconverged rows get
            zero sensitivity

    Returns:
        A :class:`MinimizerAdjoint`.
    """
    mode = GradientMode(mode)
    slopes = np.asarray(slopes, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)
    minimizers = np.asarray(minimizers, dtype=np.float64)
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != minimizers.shape or slopes.shape[0] != minimizers.shape[0]:
        raise ContractViolation(
            "upstream, minimizers and slopes must agree in batch and dimension",
            {"upstream": upstream.shape, "minimizers": minimizers.shape, "slopes": slopes.shape},
        )

    scores = np.einsum("bim,bm->bi", slopes, minimizers) + offsets
    weights = softmax_weights(scores, temperature)
    grads = np.einsum("bi,bim->bm", weights, slopes)
    hessians = lse_hessian(slopes, weights, temperature)
    clamped = clamped_coordinates(minimizers, grads, box, ACTIVE_MARGIN)

    slope_grads = np.zeros_like(slopes)
    offset_grads = np.zeros_like(offsets)
    if mode is GradientMode.DETACHED:
        sensitivities = tuple(
            MinimizerSensitivity(clamped[b], hessians[b], mode) for b in range(slopes.shape[0])
        )
        return MinimizerAdjoint(slope_grads, offset_grads, sensitivities)

    sensitivities = []
    for b in range(slopes.shape[0]):
        free = ~clamped[b]
        if converged is not None and not converged[b]:
            logger.warning(f"Unconverged minimizer in row {b}; using zero sensitivity")
            free = np.zeros_like(free)
        w, damped = _solve_free_block(hessians[b], upstream[b], free)
        if damped:
            logger.warning(f"Near-singular Hessian in row {b}; using damped solve")
        sensitivities.append(MinimizerSensitivity(~free, hessians[b], mode, damped))
        q = slopes[b] @ w
        centered = weights[b] * (q - weights[b] @ q) / temperature
        slope_grads[b] = -(weights[b][:, None] * w[None, :] + centered[:, None] * minimizers[b][None, :])
        offset_grads[b] = -centered
    return MinimizerAdjoint(slope_grads, offset_grads, tuple(sensitivities))


def minimizer_vjp(
    net: PlseNet,
    x: np.ndarray,
    solve: SolveResult,
    upstream: np.ndarray,
    box: Box,
    mode: Union[GradientMode, str] = GradientMode.IMPLICIT,
) -> PlseNet:
    """Gradient of ``<upstream, u*(x; theta)>`` with respect to the PCM parameters.

    Raises:
        ContractViolation: If ``solve`` did not converge or ``upstream`` has
            the wrong dimension.
    """
    mode = GradientMode(mode)
    upstream = np.asarray(upstream, dtype=np.float64).reshape(-1)
    if upstream.shape[0] != net.u_dim:
        raise ContractViolation("upstream must have dimension m", {"upstream": upstream.shape, "m": net.u_dim})
    if not solve.converged:
        raise ContractViolation("minimizer_vjp needs a converged solve", {"iterations": solve.iterations})
    if mode is GradientMode.DETACHED:
        return unflatten_parameters(net, np.zeros_like(flatten_parameters(net)))

    slopes, offsets, cache = plse_affine(net, x)
    adjoint = minimizer_vjp_batch(
        slopes,
        offsets,
        net.temperature,
        solve.minimizer.reshape(1, -1),
        upstream.reshape(1, -1),
        box,
        mode,
    )
    return plse_backward(net, cache, adjoint.slope_grads, adjoint.offset_grads)
