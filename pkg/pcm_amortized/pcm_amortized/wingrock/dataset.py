"""Random NMPC datasets ``(x = (x0, xd), u = u_seq, f = J)``."""

import logging

import numpy as np
import pandas as pd

from ..numerics import RngSeed
from ..pcm import Dataset, split_indices
from .models import NmpcProblem, WingRockConsts
from .objective import nmpc_objective

logger = logging.getLogger(__name__)


def generate_nmpc_dataset(
    n: int,
    problem: NmpcProblem,
    consts: WingRockConsts,
    seed: RngSeed,
    split: tuple[float, float, float] = (0.7, 0.2, 0.1),
) -> Dataset:
    """Sample ``x0``, ``xd`` and ``u_seq`` uniformly from their boxes and evaluate J."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x0 = problem.state_box_x0.sample(seed.stream("nmpc/x0"), n)
    xd = problem.setpoint_box.sample(seed.stream("nmpc/xd"), n)
    u_seq = problem.u_box.sample(seed.stream("nmpc/u"), n)
    values = nmpc_objective(x0, xd, u_seq, problem, consts)
    train, valid, test = split_indices(n, split, seed.stream("nmpc/split"))
    logger.info(f"Generated {n} NMPC samples ({train.size}/{valid.size}/{test.size})")
    return Dataset(np.concatenate([x0, xd], axis=1), u_seq, values, train, valid, test)


def nmpc_dataset_frame(dataset: Dataset) -> pd.DataFrame:
    """Dataset file rows: ``x0_phi, x0_phidot, xd_phi, xd_phidot, u1..uN, J, split_tag`` (radians)."""
    frame = pd.DataFrame(dataset.X, columns=["x0_phi", "x0_phidot", "xd_phi", "xd_phidot"])
    for k in range(dataset.U.shape[1]):
        frame[f"u{k + 1}"] = dataset.U[:, k]
    frame["J"] = dataset.F
    frame["split_tag"] = dataset.split_tags().astype(str)
    return frame
