"""EPLSE evaluation, minimizer retrieval and the training-loss gradient.

The minimizer ``u*(x)`` of the PLSE+ minorant is recomputed on every forward
pass and cached per distinct ``x`` within a batch.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..approximators import (
    FnnCache,
    PlseCache,
    fnn_backward,
    fnn_forward,
    plse_affine,
    plse_backward,
)
from ..numerics import ContractViolation, logsumexp, softmax_weights
from ..sensitivity import GradientMode, minimizer_vjp_batch
from ..solvers import (
    BatchSolveResult,
    SolveResult,
    SolverNotConvergedError,
    minimize_lse_batch,
    solve_pcm,
)
from .models import EplseModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EplseForward:
    """Batched EPLSE evaluation with everything the backward pass needs."""

    values: np.ndarray
    pcm_values: np.ndarray
    gap_values: np.ndarray
    gap_active: np.ndarray
    weights: np.ndarray
    slopes: np.ndarray
    offsets: np.ndarray
    solves: BatchSolveResult
    pcm_cache: PlseCache
    gap_cache: FnnCache


def _as_batch(values: np.ndarray, dim: int, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    batch = values.reshape(1, -1) if values.ndim <= 1 else values
    if batch.shape[1] != dim:
        raise ContractViolation(f"{name} dimension mismatch", {name: values.shape, "expected": dim})
    return batch


def cached_minimizers(
    model: EplseModel,
    X: np.ndarray,
    slopes: np.ndarray,
    offsets: np.ndarray,
) -> BatchSolveResult:
    """PCM minimizers for every row of ``X``, solving once per distinct row."""
    _, first, inverse = np.unique(X, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    unique = minimize_lse_batch(
        slopes[first], offsets[first], model.pcm.temperature, model.u_box, model.solver_opts
    )
    if not np.all(unique.converged):
        logger.warning(f"{int(np.sum(~unique.converged))} of {first.size} PCM solves did not converge")
    return BatchSolveResult(
        minimizers=unique.minimizers[inverse],
        values=unique.values[inverse],
        iterations=unique.iterations[inverse],
        converged=unique.converged[inverse],
    )


def eplse_forward(model: EplseModel, X: np.ndarray, U: np.ndarray) -> EplseForward:
    """Evaluate ``pcm(x, u) + max(0, gap(x, u) - gap(x, u*(x)))`` on a batch."""
    X = _as_batch(X, model.x_dim, "x")
    U = _as_batch(U, model.u_dim, "u")
    if X.shape[0] != U.shape[0]:
        raise ContractViolation("x and u batches differ in length", {"x": X.shape[0], "u": U.shape[0]})
    batch = X.shape[0]
    slopes, offsets, pcm_cache = plse_affine(model.pcm, X)
    scores = np.einsum("bim,bm->bi", slopes, U) + offsets
    temperature = model.pcm.temperature
    pcm_values = logsumexp(scores, temperature)
    weights = softmax_weights(scores, temperature)

    solves = cached_minimizers(model, X, slopes, offsets)
    # Both gap evaluations share one pass so identical inputs give identical outputs.
    stacked = np.concatenate(
        [np.concatenate([X, U], axis=1), np.concatenate([X, solves.minimizers], axis=1)]
    )
    gap_out, gap_cache = fnn_forward(model.gap_net, stacked)
    difference = gap_out[:batch, 0] - gap_out[batch:, 0]
    active = difference > 0.0
    gap_values = np.where(active, difference, 0.0)
    return EplseForward(
        values=pcm_values + gap_values,
        pcm_values=pcm_values,
        gap_values=gap_values,
        gap_active=active,
        weights=weights,
        slopes=slopes,
        offsets=offsets,
        solves=solves,
        pcm_cache=pcm_cache,
        gap_cache=gap_cache,
    )


def eplse_eval(model: EplseModel, x: np.ndarray, u: np.ndarray) -> tuple[float, SolveResult]:
    """EPLSE value at one ``(x, u)`` and the PCM solve it used.

    Raises:
        SolverNotConvergedError: If the PCM solve at ``x`` did not converge.
    """
    forward = eplse_forward(model, x, u)
    solve = forward.solves.item(0)
    if not solve.converged:
        raise SolverNotConvergedError(
            "PCM solve did not converge during EPLSE evaluation",
            {"x": np.asarray(x).tolist(), "iterations": solve.iterations},
        )
    return float(forward.values[0]), solve


def predict_minimizer(model: EplseModel, x: np.ndarray) -> SolveResult:
    """Global minimizer of the EPLSE model in ``u`` at ``x``.

    This is the PCM minimizer: the gap term vanishes there and is
    nonnegative everywhere else.
    """
    return solve_pcm(model.pcm, np.asarray(x, dtype=np.float64), model.u_box, model.solver_opts)


def eplse_loss_and_grad(
    model: EplseModel,
    X: np.ndarray,
    U: np.ndarray,
    F: np.ndarray,
    mode: Union[GradientMode, str] = GradientMode.IMPLICIT,
) -> tuple[float, EplseModel]:
    """Mean squared error and its gradient with respect to all EPLSE parameters.

    The PCM parameters receive the direct term and, in implicit mode, the
    term through ``gap(x, u*(x; theta1))``; the gap parameters receive both
    gap evaluations. At ``gap(x, u) == gap(x, u*)`` the subgradient 0 is used.

    Returns:
        ``(loss, grads)`` with ``grads`` shaped like ``model``.
    """
    mode = GradientMode(mode)
    forward = eplse_forward(model, X, U)
    X = _as_batch(X, model.x_dim, "x")
    U = _as_batch(U, model.u_dim, "u")
    F = np.asarray(F, dtype=np.float64).reshape(-1)
    batch = X.shape[0]
    residual = forward.values - F
    loss = float(np.mean(residual * residual))
    upstream = 2.0 * residual / batch

    scaled = forward.weights * upstream[:, None]
    slope_grads = scaled[:, :, None] * U[:, None, :]
    offset_grads = scaled

    gap_upstream = np.where(forward.gap_active, upstream, 0.0)
    out_upstream = np.concatenate([gap_upstream, -gap_upstream])[:, None]
    input_grads, gap_grads = fnn_backward(model.gap_net, forward.gap_cache, out_upstream)

    if mode is GradientMode.IMPLICIT:
        adjoint = minimizer_vjp_batch(
            forward.slopes,
            forward.offsets,
            model.pcm.temperature,
            forward.solves.minimizers,
            input_grads[batch:, model.x_dim :],
            model.u_box,
            mode,
            converged=forward.solves.converged,
        )
        slope_grads = slope_grads + adjoint.slope_grads
        offset_grads = offset_grads + adjoint.offset_grads

    pcm_grads = plse_backward(model.pcm, forward.pcm_cache, slope_grads, offset_grads)
    return loss, EplseModel(pcm_grads, gap_grads, model.u_box, model.solver_opts)

