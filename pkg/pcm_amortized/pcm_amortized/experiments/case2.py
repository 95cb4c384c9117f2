"""Case 2: wing-rock NMPC, test-split objective metrics and closed-loop runs."""

import logging
import time
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from ..approximators import ModelKind
from ..config import LINEAR_MPC, Experiment, RunConfig
from ..pcm import (
    Dataset,
    ObjectiveMetrics,
    Surrogate,
    TrainResult,
    evaluate_objective_metrics,
    train_supervised,
    write_validated_csv,
)
from ..wingrock import (
    Controller,
    Trajectory,
    WingRockError,
    case2_metrics_schema,
    closed_loop_sim,
    generate_nmpc_dataset,
    linear_mpc_baseline,
    nmpc_dataset_frame,
    nmpc_dataset_schema,
    nmpc_objective_xu,
    surrogate_controller,
    trajectory_schema,
)
from .case1 import MODEL_ERRORS, trainable_kinds
from .manifest import write_manifest
from .models import ExperimentOutcome

logger = logging.getLogger(__name__)

X_DIM = 4


def generate_case2_dataset(config: RunConfig) -> Dataset:
    return generate_nmpc_dataset(
        config.case2.samples,
        config.nmpc_problem(),
        config.wingrock_consts(),
        config.seed,
        config.split_fractions(),
    )


def scenario(config: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    """Closed-loop initial state and setpoint in radians."""
    c = config.case2
    x0 = np.deg2rad([c.x0_phi_deg, c.x0_phidot_degps])
    xd = np.deg2rad([c.xd_phi_deg, c.xd_phidot_degps])
    return x0, xd


def train_case2_model(
    config: RunConfig,
    kind: ModelKind,
    dataset: Dataset,
    out_dir: Optional[Path] = None,
) -> TrainResult:
    problem = config.nmpc_problem()
    return train_supervised(
        kind,
        dataset,
        config.train_config(kind),
        shape=config.network_shape(X_DIM, problem.horizon),
        u_box=problem.u_box,
        solver_opts=config.solver_opts(),
        output_dir=out_dir,
    )


def _true_objective(config: RunConfig):
    problem = config.nmpc_problem()
    consts = config.wingrock_consts()

    def objective(X: np.ndarray, U: np.ndarray) -> np.ndarray:
        return nmpc_objective_xu(X, U, problem, consts)

    return objective


def evaluate_case2_model(config: RunConfig, surrogate: Surrogate, dataset: Dataset) -> ObjectiveMetrics:
    """Mean true objective at the surrogate's minimizers on the test split."""
    X_test, _, _ = dataset.split("test")
    metrics = evaluate_objective_metrics(surrogate, X_test, _true_objective(config))
    logger.info(
        f"{surrogate.kind.value}: mean J {metrics.mean_objective:.6g}, solve {metrics.mean_solve_seconds:.3g}s"
    )
    return metrics


def evaluate_controller(config: RunConfig, controller: Controller, dataset: Dataset) -> ObjectiveMetrics:
    """Mean true objective of a plain controller's input sequences on the test split."""
    X_test, _, _ = dataset.split("test")
    inputs, seconds = [], []
    for x in X_test:
        started = time.perf_counter()
        inputs.append(np.asarray(controller(x), dtype=np.float64).reshape(-1))
        seconds.append(time.perf_counter() - started)
    values = _true_objective(config)(X_test, np.stack(inputs))
    return ObjectiveMetrics(float(np.mean(values)), float(np.mean(seconds)), 0)


def simulate_controller(
    config: RunConfig,
    name: str,
    controller: Controller,
    out_dir: Optional[Path] = None,
) -> Trajectory:
    """Closed-loop run of the configured scenario; writes ``case2-trajectory-<name>.csv``.

    Raises:
        InputConstraintViolation: If the controller leaves the input box.
    """
    x0, xd = scenario(config)
    trajectory = closed_loop_sim(
        controller, x0, xd, config.case2.tf, config.nmpc_problem(), config.wingrock_consts()
    )
    if out_dir is not None:
        write_validated_csv(trajectory.to_frame(), trajectory_schema, Path(out_dir) / f"case2-trajectory-{name}.csv")
    return trajectory


def metrics_row(name: str, metrics: Optional[ObjectiveMetrics], trajectory: Optional[Trajectory], xd) -> dict:
    phi_err, rate_err = trajectory.terminal_errors(xd) if trajectory is not None else (np.nan, np.nan)
    return {
        "model_kind": name,
        "mean_objective": metrics.mean_objective if metrics else np.nan,
        "mean_solve_seconds": metrics.mean_solve_seconds if metrics else np.nan,
        "terminal_phi_err_deg": phi_err,
        "terminal_phidot_err_degps": rate_err,
        "excluded_samples": metrics.excluded_samples if metrics else 0,
    }


def run_case2(config: RunConfig) -> ExperimentOutcome:
    """NMPC dataset, training, test metrics and closed-loop runs.

    Writes into ``config.run.output_dir``: ``manifest.txt``,
    ``case2-dataset.csv``, ``<kind>-loss.csv``, ``<kind>-best.ckpt``,
    ``case2-trajectory-<kind>.csv`` and ``case2-metrics.csv``. A controller
    that leaves the input box aborts its own rollout and is reported as failed.
    The linear-MPC baseline always runs, whether or not it is listed in
    ``models``.
    """
    out_dir = Path(config.run.output_dir)
    outcome = ExperimentOutcome()
    outcome.artifacts.append(write_manifest(out_dir, config, Experiment.CASE2.value))
    problem = config.nmpc_problem()
    _, xd = scenario(config)

    dataset = generate_case2_dataset(config)
    outcome.artifacts.append(
        write_validated_csv(
            nmpc_dataset_frame(dataset), nmpc_dataset_schema(problem.horizon), out_dir / "case2-dataset.csv"
        )
    )

    rows = []
    for kind in trainable_kinds(config):
        metrics, trajectory = None, None
        try:
            result = train_case2_model(config, kind, dataset, out_dir)
            metrics = evaluate_case2_model(config, result.model, dataset)
            trajectory = simulate_controller(config, kind.value, surrogate_controller(result.model), out_dir)
        except MODEL_ERRORS + (WingRockError,) as e:
            logger.error(f"Case 2 {kind.value} failed: {e}")
            outcome.failures.append(kind.value)
        if metrics is not None:
            rows.append(metrics_row(kind.value, metrics, trajectory, xd))

    controller = linear_mpc_baseline(problem, config.wingrock_consts(), config.solver_opts())
    metrics, trajectory = evaluate_controller(config, controller, dataset), None
    try:
        trajectory = simulate_controller(config, LINEAR_MPC, controller, out_dir)
    except WingRockError as e:
        logger.error(f"Case 2 {LINEAR_MPC} failed: {e}")
        outcome.failures.append(LINEAR_MPC)
    rows.append(metrics_row(LINEAR_MPC, metrics, trajectory, xd))

    frame = pd.DataFrame(rows, columns=list(case2_metrics_schema.columns))
    outcome.artifacts.append(write_validated_csv(frame, case2_metrics_schema, out_dir / "case2-metrics.csv"))
    return outcome
