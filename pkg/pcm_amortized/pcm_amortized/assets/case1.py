"""Case-1 assets: dataset -> trained approximators -> metrics."""

from pathlib import Path

import pandas as pd
from dagster import AssetExecutionContext, MetadataValue, asset

from ..config import Experiment
from ..experiments.case1 import (
    MODEL_ERRORS,
    case1_dataset_frame,
    case1_min_oracle,
    evaluate_case1_model,
    generate_case1_dataset,
    metrics_row,
    train_case1_model,
    trainable_kinds,
)
from ..experiments.manifest import write_manifest
from ..experiments.schemas import case1_dataset_schema
from ..pcm import Dataset, TrainResult, metrics_schema, write_validated_csv


def _records(frame: pd.DataFrame) -> list[dict]:
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


@asset(
    name="case1_dataset",
    compute_kind="numpy",
    group_name="case1",
    required_resource_keys={"experiment"}
)
def case1_dataset_asset(context: AssetExecutionContext) -> Dataset:
    """Uniform ``(x, u, f)`` samples of the scalar benchmark with their split."""
    config = context.resources.experiment.run_config()
    out_dir = Path(config.run.output_dir)
    write_manifest(out_dir, config, Experiment.CASE1.value)
    dataset = generate_case1_dataset(config)
    path = write_validated_csv(case1_dataset_frame(dataset), case1_dataset_schema, out_dir / "case1-dataset.csv")
    context.add_output_metadata({
        "samples": len(dataset),
        "train": int(dataset.train_idx.size),
        "valid": int(dataset.valid_idx.size),
        "test": int(dataset.test_idx.size),
        "path": MetadataValue.path(str(path)),
    })
    return dataset


@asset(
    name="case1_models",
    compute_kind="numpy",
    group_name="case1",
    required_resource_keys={"experiment"}
)
def case1_models_asset(context: AssetExecutionContext, case1_dataset: Dataset) -> dict[str, TrainResult]:
    """One trained approximator per requested kind; failed kinds are logged and left out."""
    config = context.resources.experiment.run_config()
    trained = {}
    for kind in trainable_kinds(config):
        try:
            trained[kind.value] = train_case1_model(config, kind, case1_dataset, Path(config.run.output_dir))
        except MODEL_ERRORS as e:
            context.log.error(f"Training {kind.value} failed: {e}")
    context.add_output_metadata({
        kind: MetadataValue.json({"best_epoch": r.best_epoch, "best_valid_loss": r.best_valid_loss})
        for kind, r in trained.items()
    })
    return trained


@asset(
    name="case1_metrics",
    compute_kind="pandas",
    group_name="case1",
    required_resource_keys={"experiment"}
)
def case1_metrics_asset(
    context: AssetExecutionContext,
    case1_dataset: Dataset,
    case1_models: dict[str, TrainResult],
) -> pd.DataFrame:
    """Test-split minimizer and minimum-value errors against the grid oracle."""
    config = context.resources.experiment.run_config()
    out_dir = Path(config.run.output_dir)
    oracle = case1_min_oracle(config)
    rows = []
    for kind, result in case1_models.items():
        try:
            metrics = evaluate_case1_model(config, result.model, case1_dataset, oracle, out_dir)
        except MODEL_ERRORS as e:
            context.log.error(f"Evaluating {kind} failed: {e}")
            continue
        rows.append(metrics_row(kind, metrics))
    frame = pd.DataFrame(rows, columns=list(metrics_schema.columns))
    write_validated_csv(frame, metrics_schema, out_dir / "case1-metrics.csv")
    context.add_output_metadata({"metrics": MetadataValue.json(_records(frame))})
    return frame
