"""Feed-forward networks: batched forward pass and reverse-mode gradients."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..numerics import ContractViolation
from .models import Activation, FnnParams


@dataclass(frozen=True)
class FnnCache:
    """Intermediate values of a forward pass needed by the backward pass."""

    layer_inputs: tuple[np.ndarray, ...]
    hidden_outputs: tuple[np.ndarray, ...]
    squeeze: bool


def _activate(z: np.ndarray, activation: Activation) -> np.ndarray:
    if activation is Activation.TANH:
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _activation_grad(output: np.ndarray, activation: Activation) -> np.ndarray:
    # Derivative expressed through the activation output.
    if activation is Activation.TANH:
        return 1.0 - output * output
    return (output > 0.0).astype(np.float64)


def _as_batch(net: FnnParams, inputs: np.ndarray) -> tuple[np.ndarray, bool]:
    inputs = np.asarray(inputs, dtype=np.float64)
    squeeze = inputs.ndim == 1
    batch = inputs[None, :] if squeeze else inputs
    if batch.ndim != 2 or batch.shape[1] != net.input_dim:
        raise ContractViolation(
            "input dimension does not match the first layer",
            {"input": inputs.shape, "expected": net.input_dim},
        )
    return batch, squeeze


def fnn_forward(net: FnnParams, inputs: np.ndarray) -> tuple[np.ndarray, FnnCache]:
    """Evaluate the network on a batch ``(B, d)`` (or a single vector).

    Returns:
        Outputs of shape ``(B, out)`` (``(out,)`` for a single vector) and the
        cache for :func:`fnn_backward`.
    """
    activations, squeeze = _as_batch(net, inputs)
    layer_inputs, hidden_outputs = [], []
    last = len(net.layer_weights) - 1
    for index, (w, b) in enumerate(zip(net.layer_weights, net.layer_biases)):
        layer_inputs.append(activations)
        pre = activations @ w + b
        if index < last:
            activations = _activate(pre, net.activation)
            hidden_outputs.append(activations)
        else:
            activations = pre
    output = activations[0] if squeeze else activations
    return output, FnnCache(tuple(layer_inputs), tuple(hidden_outputs), squeeze)


def fnn_backward(
    net: FnnParams,
    cache: FnnCache,
    upstream: np.ndarray,
) -> tuple[np.ndarray, FnnParams]:
    """Backpropagate ``upstream = dL/d(output)`` through the network.

    Args:
        net: Network used in the forward pass
        cache: Cache returned by :func:`fnn_forward`
        upstream: Array shaped like the forward output

    Returns:
        ``dL/d(input)`` shaped like the forward input, and ``dL/d(parameters)``
        summed over the batch, as an :class:`FnnParams`.
    """
    delta = np.asarray(upstream, dtype=np.float64)
    if cache.squeeze:
        delta = delta[None, :]
    weight_grads = [None] * len(net.layer_weights)
    bias_grads = [None] * len(net.layer_weights)
    for index in range(len(net.layer_weights) - 1, -1, -1):
        weight_grads[index] = cache.layer_inputs[index].T @ delta
        bias_grads[index] = delta.sum(axis=0)
        delta = delta @ net.layer_weights[index].T
        if index > 0:
            delta = delta * _activation_grad(cache.hidden_outputs[index - 1], net.activation)
    input_grad = delta[0] if cache.squeeze else delta
    return input_grad, FnnParams(tuple(weight_grads), tuple(bias_grads), net.activation)


def fnn_eval(net: FnnParams, inputs: np.ndarray) -> np.ndarray:
    """Deterministic forward pass."""
    output, _ = fnn_forward(net, inputs)
    return output


def fnn_grads(
    net: FnnParams,
    inputs: np.ndarray,
    upstream: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, FnnParams]:
    """Jacobian with respect to a single input and parameter gradient.

    Args:
        net: Network
        inputs: Single input vector
        upstream: Output weights ``w``; the parameter gradient is that of
            ``<w, output>``. Defaults to all ones (the plain gradient for
            scalar-output networks).

    Returns:
        Jacobian ``(out, d)`` and the parameter gradient.
    """
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim != 1:
        raise ContractViolation("fnn_grads expects a single input vector", {"shape": inputs.shape})
    _, cache = fnn_forward(net, inputs)
    rows = []
    for k in range(net.output_dim):
        unit = np.zeros(net.output_dim)
        unit[k] = 1.0
        row, _ = fnn_backward(net, cache, unit)
        rows.append(row)
    weights = np.ones(net.output_dim) if upstream is None else np.asarray(upstream, dtype=np.float64)
    _, param_grad = fnn_backward(net, cache, weights)
    return np.stack(rows), param_grad
