"""Random construction of approximator networks."""

import logging

import numpy as np

from ..numerics import RngSeed
from .models import (
    Activation,
    AffineTerm,
    DlseNet,
    FnnParams,
    LseNet,
    MaNet,
    ModelKind,
    NetworkShape,
    PlseNet,
)

logger = logging.getLogger(__name__)


def _uniform_scale(fan_in: int) -> float:
    return 1.0 / np.sqrt(max(fan_in, 1))


def init_fnn(
    widths: tuple[int, ...],
    rng: np.random.Generator,
    activation: Activation = Activation.TANH,
) -> FnnParams:
    """FNN with layer widths ``(input, hidden..., output)``.

    Weights and biases are uniform in ``[-s, s]`` with ``s = 1/sqrt(fan_in)``.
    """
    weights, biases = [], []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        scale = _uniform_scale(fan_in)
        weights.append(rng.uniform(-scale, scale, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-scale, scale, size=fan_out))
    return FnnParams(tuple(weights), tuple(biases), activation)


def _init_terms(num_terms: int, dim: int, rng: np.random.Generator) -> tuple[AffineTerm, ...]:
    scale = _uniform_scale(dim)
    return tuple(
        AffineTerm(rng.uniform(-scale, scale, size=dim), rng.uniform(-scale, scale))
        for _ in range(num_terms)
    )


def init_plse(shape: NetworkShape, rng: np.random.Generator, plus_constrained: bool) -> PlseNet:
    """PLSE(+) network with tanh subnetworks of widths ``shape.sub_hidden``."""
    num_slopes = shape.num_terms - 1 if plus_constrained else shape.num_terms
    slope_widths = (shape.x_dim, *shape.sub_hidden, shape.u_dim)
    offset_widths = (shape.x_dim, *shape.sub_hidden, 1)
    a_subnets = tuple(init_fnn(slope_widths, rng) for _ in range(num_slopes))
    b_subnets = tuple(init_fnn(offset_widths, rng) for _ in range(shape.num_terms))
    return PlseNet(a_subnets, b_subnets, shape.temperature, plus_constrained, shape.u_dim)


def init_network(
    kind: ModelKind,
    shape: NetworkShape,
    seed: RngSeed,
    u_box=None,
    solver_opts=None,
):
    """Build a randomly initialized approximator.

    Args:
        kind: Approximator variant
        shape: Dimensions, term count, temperature and hidden widths
        seed: Root seed; the result is a deterministic function of it
        u_box: Feasible set of u, required for EPLSE models
        solver_opts: Solver options for EPLSE models (defaults if omitted)

    Returns:
        ``FnnParams`` (over ``(x, u)``), ``MaNet``/``LseNet``/``DlseNet`` (over
        ``z = (x, u)``), ``PlseNet`` or ``EplseModel``.

    Raises:
        ValueError: On an invalid kind/config combination.
    """
    kind = ModelKind(kind)
    rng = seed.stream(f"init/{kind.value}")
    z_dim = shape.x_dim + shape.u_dim
    logger.debug(f"Initializing {kind.value} network: {shape}")

    if kind is ModelKind.FNN:
        return init_fnn((z_dim, *shape.hidden, 1), rng, shape.activation)
    if kind is ModelKind.MA:
        return MaNet(_init_terms(shape.num_terms, z_dim, rng))
    if kind is ModelKind.LSE:
        return LseNet(_init_terms(shape.num_terms, z_dim, rng), shape.temperature)
    if kind is ModelKind.PLSE:
        return init_plse(shape, rng, plus_constrained=False)
    if kind is ModelKind.PLSE_PLUS:
        return init_plse(shape, rng, plus_constrained=True)
    if kind is ModelKind.DLSE:
        pos = LseNet(_init_terms(shape.num_terms, z_dim, rng), shape.temperature)
        neg = LseNet(_init_terms(shape.num_terms, z_dim, rng), shape.temperature)
        return DlseNet(pos, neg)

    # EPLSE pulls in the solver layer, imported here to keep package imports acyclic.
    from ..pcm.models import EplseModel
    from ..solvers.models import SolverOpts

    if u_box is None:
        raise ValueError("u_box is required to build an EPLSE model")
    pcm = init_plse(shape, rng, plus_constrained=True)
    gap_net = init_fnn((z_dim, *shape.hidden, 1), rng, Activation.TANH)
    return EplseModel(pcm, gap_net, u_box, solver_opts or SolverOpts())
