"""Declaration-order access to network parameters as one flat vector."""

from typing import Protocol

import numpy as np

from ..numerics import ContractViolation


class HasParameters(Protocol):
    def parameters(self) -> list[np.ndarray]: ...

    def with_parameters(self, arrays): ...


def flatten_parameters(net: HasParameters) -> np.ndarray:
    """Concatenate all parameter arrays of ``net`` in declaration order."""
    arrays = net.parameters()
    if not arrays:
        return np.zeros(0)
    return np.concatenate([np.asarray(a, dtype=np.float64).reshape(-1) for a in arrays])


def parameter_shapes(net: HasParameters) -> list[tuple[int, ...]]:
    """Shapes of the parameter arrays in declaration order."""
    return [tuple(np.shape(a)) for a in net.parameters()]


def unflatten_parameters(template: HasParameters, vector: np.ndarray):
    """Rebuild a network shaped like ``template`` from a flat vector.

    Raises:
        ContractViolation: If the vector length does not match the template.
    """
    vector = np.asarray(vector, dtype=np.float64).reshape(-1)
    shapes = parameter_shapes(template)
    sizes = [int(np.prod(shape)) for shape in shapes]
    if sum(sizes) != vector.size:
        raise ContractViolation(
            "parameter vector length does not match the network",
            {"expected": sum(sizes), "got": vector.size},
        )
    arrays, offset = [], 0
    for shape, size in zip(shapes, sizes):
        arrays.append(vector[offset : offset + size].reshape(shape).copy())
        offset += size
    return template.with_parameters(iter(arrays))
