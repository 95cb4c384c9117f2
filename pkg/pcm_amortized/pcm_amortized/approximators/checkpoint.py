"""Checkpoint files for trained approximators.

Layout (see ``docs/checkpoint-format.md``)::

    PCMCKPT 1\\n
    <one-line JSON header>\\n
    <parameters as little-endian float64, declaration order>

The header carries everything :func:`init_network` needs to rebuild the
network structure, so loading is ``init_network`` followed by
``unflatten_parameters``; parameters round-trip bitwise.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator

from ..numerics import ContractViolation, RngSeed
from .init import init_network
from .models import Activation, ModelKind, NetworkShape
from .params import flatten_parameters, parameter_shapes, unflatten_parameters

logger = logging.getLogger(__name__)

MAGIC = b"PCMCKPT 1\n"


class CheckpointHeader(BaseModel):
    """Structural description of a saved approximator."""

    kind: ModelKind = Field(..., description="Approximator variant")
    x_dim: int = Field(..., ge=0, description="Parameter dimension n")
    u_dim: int = Field(..., ge=1, description="Optimization variable dimension m")
    num_terms: int = Field(..., ge=1, description="Number of affine terms I")
    temperature: float = Field(..., gt=0, description="Temperature T")
    hidden: list[int] = Field(..., description="FNN hidden widths")
    sub_hidden: list[int] = Field(..., description="PLSE subnetwork hidden widths")
    activation: Activation = Field(default=Activation.TANH)
    seed: int = Field(..., ge=0, description="Initialization seed")
    u_lower: Optional[list[float]] = Field(default=None, description="EPLSE box lower bound")
    u_upper: Optional[list[float]] = Field(default=None, description="EPLSE box upper bound")
    parameter_count: int = Field(..., ge=0)
    parameter_shapes: list[list[int]] = Field(default_factory=list)

    @field_validator("hidden", "sub_hidden")
    @classmethod
    def validate_widths(cls, v: list[int]) -> list[int]:
        """Hidden widths must be positive."""
        if not v or any(w < 1 for w in v):
            raise ValueError(f"widths must be nonempty and positive, got {v}")
        return v

    def shape(self) -> NetworkShape:
        return NetworkShape(
            x_dim=self.x_dim,
            u_dim=self.u_dim,
            num_terms=self.num_terms,
            temperature=self.temperature,
            hidden=tuple(self.hidden),
            sub_hidden=tuple(self.sub_hidden),
            activation=self.activation,
        )


def save_checkpoint(
    path: Union[str, Path],
    net,
    kind: ModelKind,
    shape: NetworkShape,
    seed: RngSeed,
) -> Path:
    """Write ``net`` to ``path`` and return the path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    vector = flatten_parameters(net)
    u_box = getattr(net, "u_box", None)
    header = CheckpointHeader(
        kind=kind,
        x_dim=shape.x_dim,
        u_dim=shape.u_dim,
        num_terms=shape.num_terms,
        temperature=shape.temperature,
        hidden=list(shape.hidden),
        sub_hidden=list(shape.sub_hidden),
        activation=shape.activation,
        seed=seed.seed,
        u_lower=None if u_box is None else u_box.lower.tolist(),
        u_upper=None if u_box is None else u_box.upper.tolist(),
        parameter_count=vector.size,
        parameter_shapes=[list(s) for s in parameter_shapes(net)],
    )
    with open(path, "wb") as handle:
        handle.write(MAGIC)
        handle.write(json.dumps(header.model_dump(mode="json"), sort_keys=True).encode("utf-8"))
        handle.write(b"\n")
        handle.write(vector.astype("<f8").tobytes())
    logger.info(f"Saved {kind.value} checkpoint with {vector.size} parameters to {path}")
    return path


def load_checkpoint(path: Union[str, Path]):
    """Read a checkpoint written by :func:`save_checkpoint`.

    Returns:
        Tuple of (network, header).

    Raises:
        ContractViolation: On a bad magic line or a truncated parameter block.
    """
    with open(path, "rb") as handle:
        magic = handle.readline()
        if magic != MAGIC:
            raise ContractViolation("not a checkpoint file", {"path": str(path), "magic": magic[:16]})
        header = CheckpointHeader.model_validate(json.loads(handle.readline().decode("utf-8")))
        payload = handle.read()
    if len(payload) != 8 * header.parameter_count:
        raise ContractViolation(
            "checkpoint parameter block has the wrong length",
            {"expected": 8 * header.parameter_count, "got": len(payload)},
        )
    vector = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    u_box = None
    if header.u_lower is not None:
        from ..solvers.models import Box

        u_box = Box(np.array(header.u_lower), np.array(header.u_upper))
    template = init_network(header.kind, header.shape(), RngSeed(header.seed), u_box=u_box)
    return unflatten_parameters(template, vector), header
