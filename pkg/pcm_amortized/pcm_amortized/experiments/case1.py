"""Case 1: the scalar benchmark ``f(x, u) = x^2 + u^2 + sin(2 pi u)``.

The steps are separate functions so the CLI and the Dagster assets run the
same code: dataset -> training per model -> metrics, surfaces and the
suboptimality bound of the EPLSE model.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..approximators import ModelKind
from ..config import LINEAR_MPC, Experiment, RunConfig
from ..numerics import NumericsError
from ..pcm import (
    TRAINABLE_KINDS,
    Dataset,
    Metrics,
    Surrogate,
    TrainResult,
    TrainingError,
    evaluate_metrics,
    metrics_schema,
    report_schema,
    split_indices,
    suboptimality_bound_check,
    surface_grid,
    surface_schema,
    train_supervised,
    write_validated_csv,
)
from ..solvers import SolverError, grid_axes, grid_minimizer_set
from .manifest import write_manifest
from .models import ExperimentOutcome, SuiteResult, report_frame
from .schemas import case1_dataset_schema

logger = logging.getLogger(__name__)

X_DIM = 1
U_DIM = 1
MINIMIZER_SET_TOLERANCE = 1e-12

# Failures of one model that must not stop the others.
MODEL_ERRORS = (TrainingError, SolverError, NumericsError)


def case1_objective(X: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Batched ``x^2 + u^2 + sin(2 pi u)`` over ``(B, 1)`` inputs."""
    x = np.asarray(X, dtype=np.float64).reshape(-1)
    u = np.asarray(U, dtype=np.float64).reshape(-1)
    return x * x + u * u + np.sin(2.0 * np.pi * u)


def generate_case1_dataset(config: RunConfig) -> Dataset:
    """Uniform samples of ``(x, u)`` with exact objective values."""
    x_box, u_box = config.case1_boxes()
    n = config.case1.samples
    seed = config.seed
    X = x_box.sample(seed.stream("case1/x"), n)
    U = u_box.sample(seed.stream("case1/u"), n)
    train, valid, test = split_indices(n, config.split_fractions(), seed.stream("case1/split"))
    logger.info(f"Generated {n} Case-1 samples ({train.size}/{valid.size}/{test.size})")
    return Dataset(X, U, case1_objective(X, U), train, valid, test)


def case1_dataset_frame(dataset: Dataset) -> pd.DataFrame:
    return pd.DataFrame({
        "x": dataset.X[:, 0],
        "u": dataset.U[:, 0],
        "f": dataset.F,
        "split_tag": dataset.split_tags().astype(str),
    })


def case1_min_oracle(config: RunConfig):
    """True minimizer set and minimum of ``f(x, .)`` from a dense u-grid.

    The u-part of the objective does not depend on x, so the grid is
    evaluated once and the oracle only adds ``x^2``.
    """
    _, u_box = config.case1_boxes()
    us = grid_axes(u_box, config.case1.oracle_points)[0]
    values = us * us + np.sin(2.0 * np.pi * us)
    minimizers = grid_minimizer_set(values, us, MINIMIZER_SET_TOLERANCE)
    u_min = float(np.min(values))
    logger.info(f"Case-1 oracle: u* = {minimizers[:, 0].tolist()}, min_u = {u_min:.8f}")

    def oracle(x: np.ndarray) -> tuple[np.ndarray, float]:
        x = float(np.asarray(x, dtype=np.float64).reshape(-1)[0])
        return minimizers, x * x + u_min

    return oracle


def trainable_kinds(config: RunConfig) -> list[ModelKind]:
    """Requested model kinds that are trained as approximators."""
    kinds = []
    for name in config.model_kinds:
        if name == LINEAR_MPC:
            continue
        kind = ModelKind(name)
        if kind not in TRAINABLE_KINDS:
            raise ValueError(f"{kind.value} is not a trainable approximator")
        kinds.append(kind)
    return kinds


def train_case1_model(
    config: RunConfig,
    kind: ModelKind,
    dataset: Dataset,
    out_dir: Optional[Path] = None,
) -> TrainResult:
    _, u_box = config.case1_boxes()
    default_lr = config.case1.dlse_lr if kind is ModelKind.DLSE else None
    return train_supervised(
        kind,
        dataset,
        config.train_config(kind, experiment_default_lr=default_lr),
        shape=config.network_shape(X_DIM, U_DIM),
        u_box=u_box,
        solver_opts=config.solver_opts(),
        output_dir=out_dir,
    )


def evaluate_case1_model(
    config: RunConfig,
    surrogate: Surrogate,
    dataset: Dataset,
    oracle=None,
    out_dir: Optional[Path] = None,
) -> Metrics:
    """Test-split metrics; also writes ``case1-surface-<kind>.csv`` when ``out_dir`` is given."""
    oracle = oracle or case1_min_oracle(config)
    X_test, _, _ = dataset.split("test")
    metrics = evaluate_metrics(surrogate, X_test, oracle)
    kind = surrogate.kind.value
    logger.info(
        f"{kind}: minimizer err {metrics.mean_minimizer_err:.6g}, "
        f"min-value err {metrics.mean_minvalue_err:.6g}, solve {metrics.mean_solve_seconds:.3g}s"
    )
    if out_dir is not None:
        x_box, u_box = config.case1_boxes()
        points = config.case1.surface_points
        surface = surface_grid(surrogate, grid_axes(x_box, points)[0], grid_axes(u_box, points)[0])
        write_validated_csv(surface, surface_schema, Path(out_dir) / f"case1-surface-{kind}.csv")
    return metrics


def case1_bound_suite(config: RunConfig, surrogate: Surrogate) -> SuiteResult:
    """Suboptimality bound ``f(x, u_hat) <= 2 eps_hat + min f(x, .) + tol`` on the bound grid."""
    x_box, u_box = config.case1_boxes()
    c = config.case1
    x_grid = np.linspace(x_box.lower[0], x_box.upper[0], c.bound_x_points)
    u_grid = grid_axes(u_box, c.bound_u_points)[0]
    report = suboptimality_bound_check(surrogate, case1_objective, x_grid, u_grid, c.bound_tolerance)
    return SuiteResult.from_errors(
        "suboptimality_bound",
        report.suboptimality - 2.0 * report.epsilon_hat,
        c.bound_tolerance,
    )


def metrics_row(kind: str, metrics: Metrics) -> dict:
    return {
        "model_kind": kind,
        "mean_minimizer_err": metrics.mean_minimizer_err,
        "mean_minvalue_err": metrics.mean_minvalue_err,
        "mean_solve_seconds": metrics.mean_solve_seconds,
        "excluded_samples": metrics.excluded_samples,
    }


def run_case1(config: RunConfig) -> ExperimentOutcome:
    """Dataset, training, metrics and surfaces for every requested model.

    Writes into ``config.run.output_dir``: ``manifest.txt``,
    ``case1-dataset.csv``, ``<kind>-loss.csv``, ``<kind>-best.ckpt``,
    ``case1-surface-<kind>.csv``, ``case1-metrics.csv`` and, for EPLSE,
    ``case1-bound.csv``. A model that fails is reported and skipped.
    """
    out_dir = Path(config.run.output_dir)
    outcome = ExperimentOutcome()
    outcome.artifacts.append(write_manifest(out_dir, config, Experiment.CASE1.value))
    if LINEAR_MPC in config.model_kinds:
        logger.warning("linear-mpc is a Case-2 baseline; ignoring it for Case 1")

    dataset = generate_case1_dataset(config)
    outcome.artifacts.append(
        write_validated_csv(case1_dataset_frame(dataset), case1_dataset_schema, out_dir / "case1-dataset.csv")
    )
    oracle = case1_min_oracle(config)

    rows = []
    for kind in trainable_kinds(config):
        try:
            result = train_case1_model(config, kind, dataset, out_dir)
            metrics = evaluate_case1_model(config, result.model, dataset, oracle, out_dir)
        except MODEL_ERRORS as e:
            logger.error(f"Case 1 {kind.value} failed: {e}")
            outcome.failures.append(kind.value)
            continue
        rows.append(metrics_row(kind.value, metrics))
        if kind is ModelKind.EPLSE:
            bound = case1_bound_suite(config, result.model)
            outcome.artifacts.append(
                write_validated_csv(report_frame([bound]), report_schema, out_dir / "case1-bound.csv")
            )
            if not bound.passed:
                logger.error(f"EPLSE suboptimality bound failed at {bound.failures} grid points")
                outcome.failures.append("suboptimality_bound")

    if rows:
        frame = pd.DataFrame(rows, columns=list(metrics_schema.columns))
        outcome.artifacts.append(write_validated_csv(frame, metrics_schema, out_dir / "case1-metrics.csv"))
    return outcome
