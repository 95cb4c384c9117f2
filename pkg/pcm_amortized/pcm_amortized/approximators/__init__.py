"""Approximator networks: FNN, MA, LSE, PLSE, PLSE+ and DLSE."""

from .checkpoint import CheckpointHeader, load_checkpoint, save_checkpoint
from .fnn import FnnCache, fnn_backward, fnn_eval, fnn_forward, fnn_grads
from .init import init_fnn, init_network, init_plse
from .lse import (
    dlse_eval,
    dlse_forward,
    dlse_param_grad,
    lse_eval,
    lse_forward,
    lse_hessian,
    lse_param_grad,
    ma_eval,
)
from .models import (
    Activation,
    AffineTerm,
    DlseNet,
    FnnParams,
    LseNet,
    MaNet,
    ModelKind,
    Network,
    NetworkShape,
    PlseNet,
)
from .params import flatten_parameters, parameter_shapes, unflatten_parameters
from .plse import (
    PlseCache,
    PlseForward,
    plse_affine,
    plse_backward,
    plse_eval,
    plse_forward,
    plse_value_backward,
)

__all__ = [
    "CheckpointHeader",
    "load_checkpoint",
    "save_checkpoint",
    "FnnCache",
    "fnn_backward",
    "fnn_eval",
    "fnn_forward",
    "fnn_grads",
    "init_fnn",
    "init_network",
    "init_plse",
    "dlse_eval",
    "dlse_forward",
    "dlse_param_grad",
    "lse_eval",
    "lse_forward",
    "lse_hessian",
    "lse_param_grad",
    "ma_eval",
    "Activation",
    "AffineTerm",
    "DlseNet",
    "FnnParams",
    "LseNet",
    "MaNet",
    "ModelKind",
    "Network",
    "NetworkShape",
    "PlseNet",
    "flatten_parameters",
    "parameter_shapes",
    "unflatten_parameters",
    "PlseCache",
    "PlseForward",
    "plse_affine",
    "plse_backward",
    "plse_eval",
    "plse_forward",
    "plse_value_backward",
]
