"""Case-2 assets: NMPC dataset -> trained approximators -> metrics and closed-loop runs."""

from pathlib import Path

import pandas as pd
from dagster import AssetExecutionContext, MetadataValue, asset

from ..config import LINEAR_MPC, Experiment
from ..experiments.case1 import MODEL_ERRORS, trainable_kinds
from ..experiments.case2 import (
    evaluate_case2_model,
    evaluate_controller,
    generate_case2_dataset,
    metrics_row,
    scenario,
    simulate_controller,
    train_case2_model,
)
from ..experiments.manifest import write_manifest
from ..pcm import Dataset, TrainResult, write_validated_csv
from ..wingrock import (
    WingRockError,
    case2_metrics_schema,
    linear_mpc_baseline,
    nmpc_dataset_frame,
    nmpc_dataset_schema,
    surrogate_controller,
)
from .case1 import _records


@asset(
    name="case2_dataset",
    compute_kind="numpy",
    group_name="case2",
    required_resource_keys={"experiment"}
)
def case2_dataset_asset(context: AssetExecutionContext) -> Dataset:
    """NMPC objective samples ``(x, u_seq, J)`` of the wing-rock plant."""
    config = context.resources.experiment.run_config()
    out_dir = Path(config.run.output_dir)
    write_manifest(out_dir, config, Experiment.CASE2.value)
    dataset = generate_case2_dataset(config)
    horizon = config.nmpc_problem().horizon
    path = write_validated_csv(nmpc_dataset_frame(dataset), nmpc_dataset_schema(horizon), out_dir / "case2-dataset.csv")
    context.add_output_metadata({
        "samples": len(dataset),
        "horizon": horizon,
        "path": MetadataValue.path(str(path)),
    })
    return dataset


@asset(
    name="case2_models",
    compute_kind="numpy",
    group_name="case2",
    required_resource_keys={"experiment"}
)
def case2_models_asset(context: AssetExecutionContext, case2_dataset: Dataset) -> dict[str, TrainResult]:
    config = context.resources.experiment.run_config()
    trained = {}
    for kind in trainable_kinds(config):
        try:
            trained[kind.value] = train_case2_model(config, kind, case2_dataset, Path(config.run.output_dir))
        except MODEL_ERRORS as e:
            context.log.error(f"Training {kind.value} failed: {e}")
    context.add_output_metadata({
        kind: MetadataValue.json({"best_epoch": r.best_epoch, "best_valid_loss": r.best_valid_loss})
        for kind, r in trained.items()
    })
    return trained


@asset(
    name="case2_metrics",
    compute_kind="pandas",
    group_name="case2",
    required_resource_keys={"experiment"}
)
def case2_metrics_asset(
    context: AssetExecutionContext,
    case2_dataset: Dataset,
    case2_models: dict[str, TrainResult],
) -> pd.DataFrame:
    """Test-split NMPC objective and closed-loop terminal errors per controller.

    Every trained approximator is rolled out from the configured scenario,
    as is the linear-MPC baseline. A rollout that leaves the input box is
    logged and keeps its objective metrics.
    """
    config = context.resources.experiment.run_config()
    out_dir = Path(config.run.output_dir)
    _, xd = scenario(config)

    controllers = []
    for kind, result in case2_models.items():
        try:
            metrics = evaluate_case2_model(config, result.model, case2_dataset)
        except MODEL_ERRORS as e:
            context.log.error(f"Evaluating {kind} failed: {e}")
            continue
        controllers.append((kind, surrogate_controller(result.model), metrics))
    baseline = linear_mpc_baseline(config.nmpc_problem(), config.wingrock_consts(), config.solver_opts())
    controllers.append((LINEAR_MPC, baseline, evaluate_controller(config, baseline, case2_dataset)))

    rows = []
    for name, controller, metrics in controllers:
        trajectory = None
        try:
            trajectory = simulate_controller(config, name, controller, out_dir)
        except MODEL_ERRORS + (WingRockError,) as e:
            context.log.error(f"Closed loop of {name} failed: {e}")
        rows.append(metrics_row(name, metrics, trajectory, xd))

    frame = pd.DataFrame(rows, columns=list(case2_metrics_schema.columns))
    path = write_validated_csv(frame, case2_metrics_schema, out_dir / "case2-metrics.csv")
    context.add_output_metadata({
        "metrics": MetadataValue.json(_records(frame)),
        "path": MetadataValue.path(str(path)),
    })
    return frame
