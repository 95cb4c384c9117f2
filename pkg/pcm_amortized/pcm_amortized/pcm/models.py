"""Value types for the PCM method: EPLSE model, datasets, configs and results."""

from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
import pandas as pd

from ..approximators import FnnParams, PlseNet
from ..numerics import ContractViolation, RngSeed
from ..sensitivity import GradientMode
from ..solvers import Box, SolverOpts
from .exceptions import EmptySplitError


@dataclass(frozen=True)
class EplseModel:
    """Extended PLSE: a PLSE+ minorant plus a nonnegative gap network.

    ``f(x, u) = pcm(x, u) + max(0, gap(x, u) - gap(x, u*(x)))`` where
    ``u*(x)`` minimizes ``pcm(x, .)`` over ``u_box``.

    Attributes:
        pcm: PLSE+ network (parameters theta1)
        gap_net: Scalar FNN over ``(x, u)`` (parameters theta2)
        u_box: Feasible set of u
        solver_opts: Options for the convex solves
    """

    pcm: PlseNet
    gap_net: FnnParams
    u_box: Box
    solver_opts: SolverOpts = field(default_factory=SolverOpts)

    def __post_init__(self) -> None:
        """Validate structure."""
        if not self.pcm.plus_constrained:
            raise ContractViolation("EPLSE requires a PLSE+ minorant (plus_constrained=True)")
        if self.u_box.dim != self.pcm.u_dim:
            raise ContractViolation(
                "u_box dimension must match the PCM", {"box": self.u_box.dim, "u_dim": self.pcm.u_dim}
            )
        expected = self.pcm.x_dim + self.pcm.u_dim
        if self.gap_net.input_dim != expected or self.gap_net.output_dim != 1:
            raise ContractViolation(
                "gap network must be scalar over (x, u)",
                {"input": self.gap_net.input_dim, "expected": expected},
            )

    @property
    def x_dim(self) -> int:
        return self.pcm.x_dim

    @property
    def u_dim(self) -> int:
        return self.pcm.u_dim

    def parameters(self) -> list[np.ndarray]:
        """PCM parameters first, then gap-network parameters."""
        return self.pcm.parameters() + self.gap_net.parameters()

    def with_parameters(self, arrays: Iterator[np.ndarray]) -> "EplseModel":
        return EplseModel(
            self.pcm.with_parameters(arrays),
            self.gap_net.with_parameters(arrays),
            self.u_box,
            self.solver_opts,
        )


@dataclass(frozen=True)
class TrainConfig:
    """Supervised training settings.

    Attributes:
        lr: Adam learning rate
        epochs: Number of passes over the training split
        batch_size: Mini-batch size
        seed: Root seed for shuffling
        split: (train, valid, test) fractions
        gradient_mode: Gradient flow through the EPLSE minimizer
        log_every: Epoch interval of progress log lines
    """

    lr: float = 1e-3
    epochs: int = 200
    batch_size: int = 16
    seed: RngSeed = field(default_factory=lambda: RngSeed(0))
    split: tuple[float, float, float] = (0.7, 0.2, 0.1)
    gradient_mode: GradientMode = GradientMode.IMPLICIT
    log_every: int = 20

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        object.__setattr__(self, "gradient_mode", GradientMode(self.gradient_mode))
        object.__setattr__(self, "split", tuple(float(s) for s in self.split))
        if not self.lr > 0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.log_every < 1:
            raise ValueError(f"log_every must be >= 1, got {self.log_every}")
        if len(self.split) != 3 or any(s <= 0 for s in self.split) or abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split must be three positive fractions summing to 1, got {self.split}")


def split_sizes(count: int, fractions: tuple[float, float, float]) -> tuple[int, int, int]:
    """Train/valid sizes rounded from the fractions; test takes the remainder."""
    train = int(round(fractions[0] * count))
    valid = int(round(fractions[1] * count))
    valid = min(valid, count - train)
    return train, valid, count - train - valid


def split_indices(
    count: int,
    fractions: tuple[float, float, float],
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random partition of ``range(count)`` into train/valid/test indices."""
    order = rng.permutation(count)
    train, valid, _ = split_sizes(count, fractions)
    return (
        np.sort(order[:train]),
        np.sort(order[train : train + valid]),
        np.sort(order[train + valid :]),
    )


SPLITS = ("train", "valid", "test")


@dataclass(frozen=True)
class Dataset:
    """Samples ``(x, u, f)`` with a train/valid/test partition.

    Attributes:
        X: Parameters ``(n_samples, n)``
        U: Decision variables ``(n_samples, m)``
        F: Objective values ``(n_samples,)``
        train_idx: Training indices
        valid_idx: Validation indices
        test_idx: Test indices
    """

    X: np.ndarray
    U: np.ndarray
    F: np.ndarray
    train_idx: np.ndarray
    valid_idx: np.ndarray
    test_idx: np.ndarray

    def __post_init__(self) -> None:
        """Check shapes and that the splits partition the samples."""
        X = np.asarray(self.X, dtype=np.float64)
        U = np.asarray(self.U, dtype=np.float64)
        F = np.asarray(self.F, dtype=np.float64).reshape(-1)
        X = X.reshape(-1, 1) if X.ndim == 1 else X
        U = U.reshape(-1, 1) if U.ndim == 1 else U
        for name, value in (("X", X), ("U", U), ("F", F)):
            object.__setattr__(self, name, value)
        for name in ("train_idx", "valid_idx", "test_idx"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.int64))
        count = F.shape[0]
        if X.shape[0] != count or U.shape[0] != count:
            raise ContractViolation(
                "X, U and F must have the same number of samples",
                {"X": X.shape, "U": U.shape, "F": F.shape},
            )
        joined = np.concatenate([self.train_idx, self.valid_idx, self.test_idx])
        if joined.size != count or not np.array_equal(np.sort(joined), np.arange(count)):
            raise ContractViolation("split indices must partition the samples", {"samples": count})

    def __len__(self) -> int:
        return self.F.shape[0]

    def indices(self, split: str) -> np.ndarray:
        if split not in SPLITS:
            raise ValueError(f"split must be one of {SPLITS}, got {split!r}")
        return getattr(self, f"{split}_idx")

    def split(self, split: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(X, U, F)`` of one split.

        Raises:
            EmptySplitError: If the split has no samples.
        """
        idx = self.indices(split)
        if idx.size == 0:
            raise EmptySplitError(split)
        return self.X[idx], self.U[idx], self.F[idx]

    def split_tags(self) -> np.ndarray:
        tags = np.empty(len(self), dtype=object)
        for name in SPLITS:
            tags[self.indices(name)] = name
        return tags


@dataclass(frozen=True)
class Metrics:
    """Test-split minimizer metrics of one approximator.

    Attributes:
        mean_minimizer_err: Mean l2 distance to the nearest true minimizer
        mean_minvalue_err: Mean absolute error of the predicted minimum value
        mean_solve_seconds: Mean wall time of one minimization
        excluded_samples: Samples dropped after a solver failure
    """

    mean_minimizer_err: float
    mean_minvalue_err: float
    mean_solve_seconds: float
    excluded_samples: int = 0

    def __post_init__(self) -> None:
        """Validate nonnegativity."""
        for name in ("mean_minimizer_err", "mean_minvalue_err", "mean_solve_seconds"):
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if self.excluded_samples < 0:
            raise ValueError(f"excluded_samples must be >= 0, got {self.excluded_samples}")


@dataclass(frozen=True)
class ObjectiveMetrics:
    """Mean true objective at the predicted minimizers and mean solve time."""

    mean_objective: float
    mean_solve_seconds: float
    excluded_samples: int = 0


@dataclass(frozen=True)
class TrainResult:
    """Best-validation approximator and the per-epoch loss history.

    Attributes:
        model: Approximator (surrogate) at the best validation epoch
        history: DataFrame with columns ``epoch, train_loss, valid_loss``
        best_epoch: Epoch index (1-based) of the best validation loss
        best_valid_loss: Validation loss of ``model``
        checkpoint_path: Where the best model was saved, if anywhere
    """

    model: object
    history: pd.DataFrame
    best_epoch: int
    best_valid_loss: float
    checkpoint_path: Optional[str] = None


@dataclass(frozen=True)
class BoundReport:
    """Observed suboptimality at the predicted minimizers versus ``2 * eps_hat``.

    Attributes:
        epsilon_hat: ``max |f_hat - f|`` over the (x, u) grid
        suboptimality: ``f(x, u*_hat(x)) - min_grid f(x, .)`` per grid x
        grid_tolerance: Slack for grid resolution
        passed: Whether every entry is within ``2 * eps_hat + grid_tolerance``
    """

    epsilon_hat: float
    suboptimality: np.ndarray
    grid_tolerance: float
    passed: bool

    @property
    def max_suboptimality(self) -> float:
        return float(np.max(self.suboptimality)) if self.suboptimality.size else 0.0

    @property
    def worst_margin(self) -> float:
        """Largest ``suboptimality - 2 * eps_hat``; nonpositive beyond tolerance when passing."""
        return self.max_suboptimality - 2.0 * self.epsilon_hat

