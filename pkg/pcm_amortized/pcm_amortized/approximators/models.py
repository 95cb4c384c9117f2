"""Value types for the approximator networks.

Networks are frozen dataclasses holding numpy arrays. Gradients with respect
to network parameters are returned as instances of the same class, so a
gradient can be flattened with exactly the layout of the parameters.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence, Union

import numpy as np

from ..numerics import ContractViolation


class ModelKind(str, Enum):
    """Approximator variants."""

    FNN = "fnn"
    MA = "ma"
    LSE = "lse"
    PLSE = "plse"
    PLSE_PLUS = "plse+"
    DLSE = "dlse"
    EPLSE = "eplse"


class Activation(str, Enum):
    """Hidden-layer activation of feed-forward networks."""

    TANH = "tanh"
    RELU = "relu"


def _as_array(value) -> np.ndarray:
    return np.asarray(value, dtype=np.float64)


@dataclass(frozen=True)
class FnnParams:
    """Feed-forward network with linear output layer.

    Attributes:
        layer_weights: Matrices of shape ``(fan_in, fan_out)``, input layer first
        layer_biases: Vectors of shape ``(fan_out,)``
        activation: Activation applied after every hidden layer
    """

    layer_weights: tuple[np.ndarray, ...]
    layer_biases: tuple[np.ndarray, ...]
    activation: Activation = Activation.TANH

    def __post_init__(self) -> None:
        """Check that layer dimensions chain."""
        weights = tuple(_as_array(w) for w in self.layer_weights)
        biases = tuple(_as_array(b) for b in self.layer_biases)
        object.__setattr__(self, "layer_weights", weights)
        object.__setattr__(self, "layer_biases", biases)
        object.__setattr__(self, "activation", Activation(self.activation))
        if not weights or len(weights) != len(biases):
            raise ContractViolation(
                "layer_weights and layer_biases must be nonempty and equally long",
                {"weights": len(weights), "biases": len(biases)},
            )
        for index, (w, b) in enumerate(zip(weights, biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise ContractViolation(
                    f"layer {index} has inconsistent shapes",
                    {"weight": w.shape, "bias": b.shape},
                )
            if index > 0 and weights[index - 1].shape[1] != w.shape[0]:
                raise ContractViolation(
                    f"layer {index} input does not match previous output",
                    {"previous": weights[index - 1].shape, "current": w.shape},
                )

    @property
    def input_dim(self) -> int:
        return self.layer_weights[0].shape[0]

    @property
    def output_dim(self) -> int:
        return self.layer_weights[-1].shape[1]

    def parameters(self) -> list[np.ndarray]:
        """Parameter arrays in declaration order (w1, b1, w2, b2, ...)."""
        arrays = []
        for w, b in zip(self.layer_weights, self.layer_biases):
            arrays.extend([w, b])
        return arrays

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "FnnParams":
        """Rebuild with arrays taken from ``arrays`` in declaration order."""
        weights, biases = [], []
        for _ in self.layer_weights:
            weights.append(next(arrays))
            biases.append(next(arrays))
        return FnnParams(tuple(weights), tuple(biases), self.activation)


@dataclass(frozen=True)
class AffineTerm:
    """One affine piece ``<a, z> + b``."""

    a: np.ndarray
    b: float

    def __post_init__(self) -> None:
        """Validate finiteness."""
        a = np.atleast_1d(_as_array(self.a))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))
        if a.ndim != 1 or not np.all(np.isfinite(a)) or not np.isfinite(self.b):
            raise ContractViolation("affine term must be a finite vector and scalar")


def _stack_terms(terms: Sequence[AffineTerm]) -> tuple[np.ndarray, np.ndarray]:
    slopes = np.stack([term.a for term in terms])
    offsets = np.array([term.b for term in terms])
    return slopes, offsets


def _check_terms(terms: Sequence[AffineTerm]) -> None:
    if len(terms) < 1:
        raise ContractViolation("at least one affine term is required", {"I": len(terms)})
    dims = {term.a.shape for term in terms}
    if len(dims) != 1:
        raise ContractViolation("affine terms must share a dimension", {"dims": sorted(dims)})


def _terms_with_parameters(terms, arrays) -> tuple[AffineTerm, ...]:
    rebuilt = []
    for _ in terms:
        a = next(arrays)
        b = next(arrays)
        rebuilt.append(AffineTerm(a, float(np.asarray(b).reshape(()))))
    return tuple(rebuilt)


@dataclass(frozen=True)
class MaNet:
    """Max-affine network ``max_i <a_i, z> + b_i``."""

    terms: tuple[AffineTerm, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        _check_terms(self.terms)

    @property
    def dim(self) -> int:
        return self.terms[0].a.shape[0]

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """Slopes ``(I, d)`` and offsets ``(I,)``."""
        return _stack_terms(self.terms)

    def parameters(self) -> list[np.ndarray]:
        arrays = []
        for term in self.terms:
            arrays.extend([term.a, np.array(term.b)])
        return arrays

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "MaNet":
        return MaNet(_terms_with_parameters(self.terms, arrays))


@dataclass(frozen=True)
class LseNet:
    """Log-sum-exp network, the temperature-smoothed max-affine network."""

    terms: tuple[AffineTerm, ...]
    temperature: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        _check_terms(self.terms)
        if not self.temperature > 0:
            raise ContractViolation(f"temperature must be > 0, got {self.temperature}")

    @property
    def dim(self) -> int:
        return self.terms[0].a.shape[0]

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """Slopes ``(I, d)`` and offsets ``(I,)``."""
        return _stack_terms(self.terms)

    def parameters(self) -> list[np.ndarray]:
        arrays = []
        for term in self.terms:
            arrays.extend([term.a, np.array(term.b)])
        return arrays

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "LseNet":
        return LseNet(_terms_with_parameters(self.terms, arrays), self.temperature)


@dataclass(frozen=True)
class PlseNet:
    """Parameterized log-sum-exp network.

    Slopes ``a_i(x)`` and offsets ``b_i(x)`` are produced by subnetworks. With
    ``plus_constrained`` the first slope subnetwork does not exist at all and
    ``a_1(x) = 0``; ``a_subnets`` then has ``I - 1`` entries.

    Attributes:
        a_subnets: Slope subnetworks ``X -> R^m``
        b_subnets: Offset subnetworks ``X -> R``
        temperature: Positive temperature T
        plus_constrained: Whether the first slope is structurally zero
        u_dim: Dimension m of the optimization variable
    """

    a_subnets: tuple[FnnParams, ...]
    b_subnets: tuple[FnnParams, ...]
    temperature: float = 1.0
    plus_constrained: bool = True
    u_dim: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_subnets", tuple(self.a_subnets))
        object.__setattr__(self, "b_subnets", tuple(self.b_subnets))
        num_terms = len(self.b_subnets)
        expected = num_terms - 1 if self.plus_constrained else num_terms
        if num_terms < 1:
            raise ContractViolation("PLSE needs at least one term", {"I": num_terms})
        if len(self.a_subnets) != expected:
            raise ContractViolation(
                "number of slope subnetworks does not match the term count",
                {"I": num_terms, "a_subnets": len(self.a_subnets), "plus": self.plus_constrained},
            )
        if not self.temperature > 0:
            raise ContractViolation(f"temperature must be > 0, got {self.temperature}")
        for net in self.a_subnets:
            if net.output_dim != self.u_dim:
                raise ContractViolation(
                    "slope subnetwork output must equal u_dim",
                    {"output": net.output_dim, "u_dim": self.u_dim},
                )
        for net in self.b_subnets:
            if net.output_dim != 1:
                raise ContractViolation("offset subnetworks must be scalar-valued")
        inputs = {net.input_dim for net in self.a_subnets + self.b_subnets}
        if len(inputs) != 1:
            raise ContractViolation("subnetworks must share an input dimension")

    @property
    def num_terms(self) -> int:
        return len(self.b_subnets)

    @property
    def x_dim(self) -> int:
        return self.b_subnets[0].input_dim

    def parameters(self) -> list[np.ndarray]:
        """Slope subnetworks first, then offset subnetworks."""
        arrays = []
        for net in self.a_subnets + self.b_subnets:
            arrays.extend(net.parameters())
        return arrays

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "PlseNet":
        a_subnets = tuple(net.with_parameters(arrays) for net in self.a_subnets)
        b_subnets = tuple(net.with_parameters(arrays) for net in self.b_subnets)
        return PlseNet(a_subnets, b_subnets, self.temperature, self.plus_constrained, self.u_dim)


@dataclass(frozen=True)
class DlseNet:
    """Difference of two LSE networks with a shared temperature."""

    lse_pos: LseNet
    lse_neg: LseNet

    def __post_init__(self) -> None:
        if self.lse_pos.temperature != self.lse_neg.temperature:
            raise ContractViolation(
                "DLSE components must share a temperature",
                {"pos": self.lse_pos.temperature, "neg": self.lse_neg.temperature},
            )
        if self.lse_pos.dim != self.lse_neg.dim:
            raise ContractViolation("DLSE components must share a dimension")

    @property
    def temperature(self) -> float:
        return self.lse_pos.temperature

    @property
    def dim(self) -> int:
        return self.lse_pos.dim

    def parameters(self) -> list[np.ndarray]:
        return self.lse_pos.parameters() + self.lse_neg.parameters()

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "DlseNet":
        return DlseNet(self.lse_pos.with_parameters(arrays), self.lse_neg.with_parameters(arrays))


@dataclass(frozen=True)
class NetworkShape:
    """Shape configuration for :func:`init_network`.

    Attributes:
        x_dim: Parameter dimension n (0 allowed for plain LSE/MA over u)
        u_dim: Optimization-variable dimension m
        num_terms: Number of affine terms I
        temperature: Temperature T for LSE-type networks
        hidden: Hidden widths of FNNs over (x, u)
        sub_hidden: Hidden widths of the PLSE slope/offset subnetworks
        activation: Activation of FNN hidden layers
    """

    x_dim: int = 1
    u_dim: int = 1
    num_terms: int = 20
    temperature: float = 1.0
    hidden: tuple[int, ...] = (64, 64)
    sub_hidden: tuple[int, ...] = (16, 16)
    activation: Activation = Activation.TANH

    def __post_init__(self) -> None:
        """Validate shape configuration."""
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        object.__setattr__(self, "sub_hidden", tuple(int(h) for h in self.sub_hidden))
        object.__setattr__(self, "activation", Activation(self.activation))
        if self.x_dim < 0:
            raise ValueError(f"x_dim must be >= 0, got {self.x_dim}")
        if self.u_dim < 1:
            raise ValueError(f"u_dim must be >= 1, got {self.u_dim}")
        if self.num_terms < 1:
            raise ValueError(f"num_terms must be >= 1, got {self.num_terms}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if not self.hidden or any(h < 1 for h in self.hidden):
            raise ValueError(f"hidden must be nonempty positive widths, got {self.hidden}")
        if not self.sub_hidden or any(h < 1 for h in self.sub_hidden):
            raise ValueError(f"sub_hidden must be nonempty positive widths, got {self.sub_hidden}")


Network = Union[FnnParams, MaNet, LseNet, PlseNet, DlseNet]
