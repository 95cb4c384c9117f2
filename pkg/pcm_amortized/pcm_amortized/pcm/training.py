"""Mini-batch supervised training with Adam and best-validation selection."""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..approximators import ModelKind, NetworkShape, save_checkpoint
from ..numerics import AdamState, adam_step
from ..solvers import Box, SolverOpts
from .exceptions import TrainingDivergedError
from .models import Dataset, TrainConfig, TrainResult
from .schemas import loss_history_schema, write_validated_csv
from .surrogates import Surrogate, make_surrogate

logger = logging.getLogger(__name__)


def _check_finite(loss: float, grads: np.ndarray, params: np.ndarray, epoch: int, batch: int) -> None:
    if not (np.isfinite(loss) and np.all(np.isfinite(grads))):
        raise TrainingDivergedError(epoch, batch, float(np.linalg.norm(params)))


def train_supervised(
    model: Union[Surrogate, ModelKind, str],
    dataset: Dataset,
    config: TrainConfig,
    shape: Optional[NetworkShape] = None,
    u_box: Optional[Box] = None,
    solver_opts: Optional[SolverOpts] = None,
    output_dir: Optional[Union[str, Path]] = None,
) -> TrainResult:
    """Fit an approximator to ``dataset`` by minimizing the mean squared error.

    Args:
        model: A surrogate to start from, or a model kind to initialize
            (then ``shape`` and ``u_box`` are required)
        dataset: Samples with train/valid/test split
        config: Learning rate, epochs, batch size, seed and gradient mode
        shape: Network shape for initialization and checkpoint headers
        u_box: Feasible box of u for initialization
        solver_opts: Solver options for the model's minimization
        output_dir: If given, the best model is saved as
            ``<kind>-best.ckpt`` and the loss history as ``<kind>-loss.csv``

    Returns:
        A :class:`TrainResult` holding the model of the epoch with the lowest
        validation loss.

    Raises:
        TrainingDivergedError: If a loss or gradient becomes non-finite.
        EmptySplitError: If the train or valid split is empty.
    """
    if isinstance(model, (ModelKind, str)):
        if shape is None or u_box is None:
            raise ValueError("shape and u_box are required to initialize a model by kind")
        model = make_surrogate(
            model, shape, config.seed.child("init"), u_box, solver_opts, config.gradient_mode
        )
    X_train, U_train, F_train = dataset.split("train")
    X_valid, U_valid, F_valid = dataset.split("valid")
    kind = model.kind.value

    shuffle = config.seed.stream("shuffle")
    params = model.parameters()
    state = AdamState.zeros(params.size)
    current = model
    best, best_epoch, best_loss = model, 0, np.inf
    rows = []
    logger.info(
        f"Training {kind}: {params.size} parameters, {F_train.size} train / {F_valid.size} valid samples, "
        f"{config.epochs} epochs, batch {config.batch_size}, lr {config.lr}"
    )

    for epoch in range(1, config.epochs + 1):
        order = shuffle.permutation(F_train.size)
        weighted_loss = 0.0
        for batch, begin in enumerate(range(0, order.size, config.batch_size)):
            idx = order[begin : begin + config.batch_size]
            loss, grads = current.loss_and_grad(X_train[idx], U_train[idx], F_train[idx])
            _check_finite(loss, grads, params, epoch, batch)
            params, state = adam_step(params, grads, state, config.lr)
            current = current.with_parameters(params)
            weighted_loss += loss * idx.size
        train_loss = weighted_loss / F_train.size
        valid_loss = current.loss(X_valid, U_valid, F_valid)
        if not np.isfinite(valid_loss):
            raise TrainingDivergedError(epoch, -1, float(np.linalg.norm(params)), "Validation loss is not finite")
        rows.append((epoch, train_loss, valid_loss))
        if valid_loss < best_loss:
            best, best_epoch, best_loss = current, epoch, valid_loss
        if epoch % config.log_every == 0 or epoch == config.epochs:
            logger.info(
                f"{kind} epoch {epoch}/{config.epochs}: train {train_loss:.6g}, valid {valid_loss:.6g}"
            )

    history = pd.DataFrame(rows, columns=["epoch", "train_loss", "valid_loss"])
    logger.info(f"Best {kind} epoch {best_epoch} with validation loss {best_loss:.6g}")

    checkpoint_path = None
    if output_dir is not None:
        output_dir = Path(output_dir)
        write_validated_csv(history, loss_history_schema, output_dir / f"{kind}-loss.csv")
        if shape is not None:
            checkpoint_path = str(
                save_checkpoint(output_dir / f"{kind}-best.ckpt", best.network, model.kind, shape, config.seed)
            )
        else:
            logger.warning(f"No network shape given; skipping the {kind} checkpoint")
    return TrainResult(best, history, best_epoch, float(best_loss), checkpoint_path)
