"""Objective approximators behind one interface used by training and metrics.

Every surrogate exposes ``predict``, ``minimize``, ``loss_and_grad`` and flat
``parameters``/``with_parameters``, so the training loop, the metric
evaluation and the bound check never branch on the model kind.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Optional, Protocol, Union

import numpy as np

from ..approximators import (
    DlseNet,
    FnnParams,
    ModelKind,
    NetworkShape,
    PlseNet,
    dlse_forward,
    dlse_param_grad,
    flatten_parameters,
    fnn_backward,
    fnn_forward,
    init_network,
    plse_forward,
    plse_value_backward,
    unflatten_parameters,
)
from ..numerics import RngSeed
from ..sensitivity import GradientMode
from ..solvers import Box, SolveResult, SolverOpts, solve_dca, solve_multistart, solve_pcm
from .eplse import eplse_forward, eplse_loss_and_grad, predict_minimizer
from .models import EplseModel

logger = logging.getLogger(__name__)

TRAINABLE_KINDS = (ModelKind.FNN, ModelKind.PLSE, ModelKind.PLSE_PLUS, ModelKind.DLSE, ModelKind.EPLSE)


class Surrogate(Protocol):
    """Trainable objective approximator ``f_hat(x, u)``."""

    kind: ModelKind

    @property
    def network(self): ...

    def predict(self, X: np.ndarray, U: np.ndarray) -> np.ndarray: ...

    def minimize(self, x: np.ndarray) -> SolveResult: ...

    def loss_and_grad(self, X: np.ndarray, U: np.ndarray, F: np.ndarray) -> tuple[float, np.ndarray]: ...

    def loss(self, X: np.ndarray, U: np.ndarray, F: np.ndarray) -> float: ...

    def parameters(self) -> np.ndarray: ...

    def with_parameters(self, vector: np.ndarray) -> "Surrogate": ...


def _batch(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return values.reshape(1, -1) if values.ndim <= 1 else values


def _joined(X: np.ndarray, U: np.ndarray) -> np.ndarray:
    return np.concatenate([_batch(X), _batch(U)], axis=1)


def _mse(predicted: np.ndarray, F: np.ndarray) -> tuple[float, np.ndarray]:
    residual = predicted - np.asarray(F, dtype=np.float64).reshape(-1)
    return float(np.mean(residual * residual)), 2.0 * residual / residual.size


class _NetworkSurrogate:
    """Flat parameter access and plain loss for surrogates wrapping ``self.net``."""

    @property
    def network(self):
        return self.net

    def parameters(self) -> np.ndarray:
        return flatten_parameters(self.net)

    def with_parameters(self, vector: np.ndarray):
        return replace(self, net=unflatten_parameters(self.net, vector))

    def loss(self, X: np.ndarray, U: np.ndarray, F: np.ndarray) -> float:
        return _mse(self.predict(X, U), F)[0]


@dataclass(frozen=True)
class FnnSurrogate(_NetworkSurrogate):
    """Plain FNN over ``(x, u)``; minimized by multistart local search."""

    net: FnnParams
    u_box: Box
    solver_opts: SolverOpts = field(default_factory=SolverOpts)
    kind: ModelKind = ModelKind.FNN

    def predict(self, X, U):
        output, _ = fnn_forward(self.net, _joined(X, U))
        return output[:, 0]

    def minimize(self, x):
        return solve_multistart(self.net, x, self.u_box, self.solver_opts)

    def loss_and_grad(self, X, U, F):
        output, cache = fnn_forward(self.net, _joined(X, U))
        loss, upstream = _mse(output[:, 0], F)
        _, grads = fnn_backward(self.net, cache, upstream[:, None])
        return loss, flatten_parameters(grads)


@dataclass(frozen=True)
class PlseSurrogate(_NetworkSurrogate):
    """PLSE or PLSE+ network; minimized by one convex solve."""

    net: PlseNet
    u_box: Box
    solver_opts: SolverOpts = field(default_factory=SolverOpts)
    kind: ModelKind = ModelKind.PLSE

    def predict(self, X, U):
        return plse_forward(self.net, X, U).values

    def minimize(self, x):
        return solve_pcm(self.net, x, self.u_box, self.solver_opts)

    def loss_and_grad(self, X, U, F):
        forward = plse_forward(self.net, X, U)
        loss, upstream = _mse(forward.values, F)
        grads = plse_value_backward(self.net, forward, U, upstream)
        return loss, flatten_parameters(grads)


@dataclass(frozen=True)
class DlseSurrogate(_NetworkSurrogate):
    """DLSE network over ``(x, u)``; minimized locally by DCA."""

    net: DlseNet
    u_box: Box
    solver_opts: SolverOpts = field(default_factory=SolverOpts)
    kind: ModelKind = ModelKind.DLSE

    def predict(self, X, U):
        values, _ = dlse_forward(self.net, _joined(X, U))
        return values

    def minimize(self, x):
        return solve_dca(self.net, self.u_box, x, self.solver_opts)

    def loss_and_grad(self, X, U, F):
        Z = _joined(X, U)
        values, _ = dlse_forward(self.net, Z)
        loss, upstream = _mse(values, F)
        return loss, flatten_parameters(dlse_param_grad(self.net, Z, upstream))


@dataclass(frozen=True)
class EplseSurrogate:
    """EPLSE model; minimized by the single convex solve of its PLSE+ part."""

    model: EplseModel
    gradient_mode: GradientMode = GradientMode.IMPLICIT
    kind: ModelKind = ModelKind.EPLSE

    @property
    def network(self) -> EplseModel:
        return self.model

    @property
    def u_box(self) -> Box:
        return self.model.u_box

    def predict(self, X, U):
        return eplse_forward(self.model, X, U).values

    def minimize(self, x):
        return predict_minimizer(self.model, x)

    def loss(self, X, U, F):
        return _mse(self.predict(X, U), F)[0]

    def loss_and_grad(self, X, U, F):
        loss, grads = eplse_loss_and_grad(self.model, X, U, F, self.gradient_mode)
        return loss, flatten_parameters(grads)

    def parameters(self) -> np.ndarray:
        return flatten_parameters(self.model)

    def with_parameters(self, vector: np.ndarray) -> "EplseSurrogate":
        return replace(self, model=unflatten_parameters(self.model, vector))


def wrap_network(
    net,
    u_box: Optional[Box] = None,
    solver_opts: Optional[SolverOpts] = None,
    gradient_mode: Union[GradientMode, str] = GradientMode.IMPLICIT,
) -> Surrogate:
    """Surrogate for an existing network (e.g. one read from a checkpoint)."""
    opts = solver_opts or SolverOpts()
    if isinstance(net, EplseModel):
        return EplseSurrogate(net, GradientMode(gradient_mode))
    if u_box is None:
        raise ValueError("u_box is required for non-EPLSE surrogates")
    if isinstance(net, FnnParams):
        return FnnSurrogate(net, u_box, opts)
    if isinstance(net, PlseNet):
        kind = ModelKind.PLSE_PLUS if net.plus_constrained else ModelKind.PLSE
        return PlseSurrogate(net, u_box, opts, kind)
    if isinstance(net, DlseNet):
        return DlseSurrogate(net, u_box, opts)
    raise ValueError(f"no surrogate for network type {type(net).__name__}")


def make_surrogate(
    kind: Union[ModelKind, str],
    shape: NetworkShape,
    seed: RngSeed,
    u_box: Box,
    solver_opts: Optional[SolverOpts] = None,
    gradient_mode: Union[GradientMode, str] = GradientMode.IMPLICIT,
) -> Surrogate:
    """Randomly initialized surrogate of the given kind.

    Raises:
        ValueError: For kinds that are not trained as objective approximators.
    """
    kind = ModelKind(kind)
    if kind not in TRAINABLE_KINDS:
        raise ValueError(f"kind must be one of {[k.value for k in TRAINABLE_KINDS]}, got {kind.value!r}")
    if shape.u_dim != u_box.dim:
        raise ValueError(f"shape.u_dim must equal the box dimension {u_box.dim}, got {shape.u_dim}")
    opts = solver_opts or SolverOpts()
    net = init_network(kind, shape, seed, u_box=u_box, solver_opts=opts)
    logger.info(f"Initialized {kind.value} surrogate with {flatten_parameters(net).size} parameters")
    return wrap_network(net, u_box, opts, gradient_mode)
